"""Exception types shared across the planner."""


class CoverPlanError(Exception):
    """Base class for all planner errors."""


class DegenerateInputError(CoverPlanError):
    """Input has too few points or zero extent to be meaningful."""


class InvalidPolygonError(CoverPlanError):
    """Vertex loop is not a simple CCW polygon."""


class UnsupportedStartError(CoverPlanError):
    """Start point lies strictly inside the target area.

    Interior start points are not supported by the planner; callers
    must supply a point on the boundary or outside the area.
    """


class PreconditionError(CoverPlanError):
    """An operation was called outside its documented preconditions."""
