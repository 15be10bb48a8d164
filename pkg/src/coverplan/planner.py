"""End-to-end offline planning pipeline shared by the CLI and simulator."""
from __future__ import annotations

import math

from .decompose import decompose_msa
from .geometry import Point, Polygon
from .stitch import CoveragePlan, stitch_classic, stitch_modified
from .sweep import boustrophedon


def plan_coverage(polygon: Polygon, start: Point, radius: float) -> CoveragePlan:
    """Decompose, sweep and stitch with the greedy pair chaining."""
    cells = decompose_msa(polygon, start, radius)
    sweeps = [boustrophedon(c, radius) for c in cells]
    return stitch_modified(cells, sweeps, start)


def plan_coverage_classic(polygon: Polygon, start: Point,
                          radius: float) -> CoveragePlan:
    """Same cells, centroid-tour order and default-pair sweeps."""
    cells = decompose_msa(polygon, start, radius)
    sweeps = [boustrophedon(c, radius) for c in cells]
    return stitch_classic(cells, sweeps, start)


def baseline_turn_total(cells, radius: float,
                        direction: Point = (0.0, 1.0)) -> int:
    """Turn count when every cell sweeps along one fixed direction.

    The default vertical direction reproduces a uni-directional
    sweep-line comparator over the same decomposition.
    """
    total = 0
    for cell in cells:
        sw = boustrophedon(cell, radius, direction=direction)
        total += sw.sweep_count - 1
    return total
