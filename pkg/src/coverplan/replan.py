"""Online replan decision loop: boundary extraction, area error, trigger.

The observed occupancy grid's free region is traced into a polygon and
compared against the reference map. Observed vertices that sit near the
reference boundary are inliers; the absolute area difference between the
observed loop and its inlier-only loop is the error that, past the
threshold, re-initializes the coverage path from the current pose.

Vertex association uses nearest-boundary distance rather than a rigid
registration step: the simulator's pose is metrically consistent with the
map, so the alignment transform is the identity.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from skimage import measure

from .errors import CoverPlanError, DegenerateInputError, PreconditionError
from .geometry import (
    Point,
    Polygon,
    boundary_distance,
    nearest_boundary_point,
    point_in_polygon,
    signed_area,
    simplify_closed,
)
from .covergrid import FREE, OccupancyGrid
from .stitch import CoveragePlan

log = logging.getLogger(__name__)

DEFAULT_SIMPLIFY_TOL = 0.10  # meters


@dataclass(frozen=True)
class AreaError:
    """Result of one observed-vs-reference comparison."""

    observed_vertices: tuple[Point, ...]
    inliers: tuple[Point, ...]
    outliers: tuple[Point, ...]
    error: float
    threshold: float

    @property
    def replan(self) -> bool:
        return self.error > self.threshold


@dataclass(frozen=True)
class ReplanAction:
    """Outcome of a replan decision."""

    kind: str  # "continue" | "replan_from"
    pose: Point | None = None
    boundary: Polygon | None = None


def extract_boundary(occ: OccupancyGrid, seed: Point | None = None,
                     simplify_tol: float = DEFAULT_SIMPLIFY_TOL) -> Polygon:
    """Trace the outer contour of the observed free region.

    The free component containing `seed` (the largest one when no seed is
    given) is contour-traced, converted to world coordinates, oriented CCW
    and simplified.
    """
    free = occ.state == FREE
    # One-cell erosion keeps the traced polygon strictly inside observed
    # free space; a contour through raw cell edges can overshoot the real
    # wall by up to half a cell, and paths planned on it would too.
    free = ndimage.binary_erosion(free)
    if not free.any():
        raise DegenerateInputError("occupancy grid has no free region")
    labels, count = ndimage.label(free)
    if seed is not None and occ.frame.in_bounds(seed):
        i, j = occ.frame.cell_of(seed)
        lab = labels[i, j]
        if lab == 0:
            lab = int(np.argmax(np.bincount(labels[free]))) or 1
    else:
        lab = int(np.argmax(np.bincount(labels[free])))
    mask = labels == lab
    contours = measure.find_contours(mask.astype(float), 0.5)
    if not contours:
        raise DegenerateInputError("free region has no traceable contour")
    contour = max(contours, key=len)
    res = occ.frame.resolution
    x0, y0 = occ.frame.origin
    pts = [(x0 + (c + 0.5) * res, y0 + (r + 0.5) * res) for r, c in contour]
    if math.dist(pts[0], pts[-1]) < 1e-12:
        pts = pts[:-1]
    if signed_area(pts) < 0:
        pts = pts[::-1]
    simplified = simplify_closed(pts, simplify_tol)
    return Polygon(simplified)


def classify_inliers(observed, reference: Polygon,
                     dist_tol: float) -> tuple[list[Point], list[Point]]:
    """Split observed vertices by distance to the reference boundary."""
    if dist_tol <= 0:
        raise PreconditionError("dist_tol must be > 0")
    pts = list(getattr(observed, "vertices", observed))
    inliers, outliers = [], []
    for pt in pts:
        if boundary_distance(reference, pt) <= dist_tol:
            inliers.append(pt)
        else:
            outliers.append(pt)
    return inliers, outliers


def _loop_area(pts) -> float:
    return abs(signed_area(pts))


def _loop_is_simple(pts) -> bool:
    try:
        loop = pts if signed_area(pts) > 0 else pts[::-1]
        Polygon(loop)
        return True
    except CoverPlanError:
        return False


def area_error(observed, inliers) -> float:
    """|area of observed loop - area of inlier-only loop|.

    Inliers keep the observed vertex order. Fewer than 3 inliers, or an
    inlier loop that self-intersects, falls back to the observed area.
    """
    obs = list(getattr(observed, "vertices", observed))
    if len(obs) < 3:
        raise DegenerateInputError("observed loop needs >= 3 vertices")
    inl = list(inliers)
    if len(inl) < 3 or not _loop_is_simple(inl):
        return _loop_area(obs)
    return abs(_loop_area(obs) - _loop_area(inl))


def evaluate(observed: Polygon, reference: Polygon, dist_tol: float,
             threshold: float) -> AreaError:
    """Run the full inlier/area-error pipeline for one observation."""
    inliers, outliers = classify_inliers(observed, reference, dist_tol)
    err = area_error(observed, inliers)
    return AreaError(
        observed_vertices=tuple(observed.vertices),
        inliers=tuple(inliers),
        outliers=tuple(outliers),
        error=err,
        threshold=threshold,
    )


def replan_threshold(plan: CoveragePlan, r: float) -> float:
    """Mean sweep-line length across all cells times the coverage radius."""
    lengths = plan.sweep_line_lengths
    if not lengths:
        raise PreconditionError("plan has no sweep lines")
    return (sum(lengths) / len(lengths)) * r


def decide(error: float, threshold: float, current_pose: Point,
           boundary: Polygon | None = None) -> ReplanAction:
    """Continue when error <= threshold (strict trigger), else replan.

    A replan carries the new boundary and the pose to restart from; an
    interior pose is snapped to the nearest boundary point so the planner
    can accept it as a start point.
    """
    if not error > threshold:
        return ReplanAction(kind="continue")
    pose = current_pose
    if boundary is not None:
        where = point_in_polygon(boundary, pose, boundary_tol=1e-6)
        if where == "inside":
            snapped = nearest_boundary_point(boundary, pose)
            log.info("replan pose %s is interior; snapped to boundary %s",
                     pose, snapped)
            pose = snapped
    return ReplanAction(kind="replan_from", pose=pose, boundary=boundary)
