"""Coverage path planning: convex decomposition, boustrophedon sweeps,
greedy stitching and online replanning with a deterministic simulator."""

from .errors import (
    CoverPlanError,
    DegenerateInputError,
    InvalidPolygonError,
    PreconditionError,
    UnsupportedStartError,
)
from .geometry import (
    Polygon,
    is_convex,
    msa_direction,
    signed_area,
    simplify_closed,
    simplify_polyline,
    triangulate_ear_clip,
)
from .decompose import ConvexCell, classify_start, decompose_msa, merge_cost
from .sweep import SweepPath, boustrophedon, endpoint_pairs, path_length
from .stitch import (
    CoveragePlan,
    compare,
    pair_distance_matrix,
    stitch_classic,
    stitch_modified,
)
from .covergrid import CoverageGrid, OccupancyGrid, best_heading
from .replan import area_error, decide, evaluate, extract_boundary, replan_threshold
from .planner import baseline_turn_total, plan_coverage, plan_coverage_classic
from .sim import LidarSpec, RobotSpec, SimConfig, SimReport, WorldEvent, WorldSpec, run
from .corpus import random_polygon, seeded_corpus, table_corpus

__version__ = "0.1.0"

__all__ = [
    "CoverPlanError",
    "DegenerateInputError",
    "InvalidPolygonError",
    "PreconditionError",
    "UnsupportedStartError",
    "Polygon",
    "is_convex",
    "msa_direction",
    "signed_area",
    "simplify_closed",
    "simplify_polyline",
    "triangulate_ear_clip",
    "ConvexCell",
    "classify_start",
    "decompose_msa",
    "merge_cost",
    "SweepPath",
    "boustrophedon",
    "endpoint_pairs",
    "path_length",
    "CoveragePlan",
    "compare",
    "pair_distance_matrix",
    "stitch_classic",
    "stitch_modified",
    "CoverageGrid",
    "OccupancyGrid",
    "best_heading",
    "area_error",
    "decide",
    "evaluate",
    "extract_boundary",
    "replan_threshold",
    "baseline_turn_total",
    "plan_coverage",
    "plan_coverage_classic",
    "LidarSpec",
    "RobotSpec",
    "SimConfig",
    "SimReport",
    "WorldEvent",
    "WorldSpec",
    "run",
    "random_polygon",
    "seeded_corpus",
    "table_corpus",
]
