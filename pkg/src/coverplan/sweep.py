"""Boustrophedon sweep generation inside convex cells.

Sweep lines run parallel to the chosen edge direction, spaced by the
robot coverage radius, each clipped to the cell boundary; consecutive
lines are joined by straight connectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError
from .geometry import EPS, Point, Polygon, msa_direction

Pair = tuple[Point, Point]


def _cell_polygon(cell) -> Polygon:
    poly = getattr(cell, "polygon", cell)
    if not isinstance(poly, Polygon):
        raise PreconditionError("expected a Polygon or an object with .polygon")
    return poly


def path_length(waypoints) -> float:
    """Total Euclidean length of a waypoint polyline."""
    pts = list(waypoints)
    if len(pts) < 2:
        raise PreconditionError("need >= 2 waypoints")
    return sum(math.dist(a, b) for a, b in zip(pts, pts[1:]))


def _chord(poly: Polygon, d: Point, nm: Point, c: float) -> tuple[Point, Point]:
    """Clip the line {x : <x, nm> = c} to a convex polygon.

    Returns the chord endpoints ordered by increasing coordinate along d.
    A tangent line yields a zero-length chord.
    """
    pts = poly.vertices
    n = len(pts)
    cs = [p[0] * nm[0] + p[1] * nm[1] for p in pts]
    ss = [p[0] * d[0] + p[1] * d[1] for p in pts]
    hits: list[float] = []
    for i in range(n):
        j = (i + 1) % n
        ci, cj = cs[i] - c, cs[j] - c
        if abs(ci) <= EPS and abs(cj) <= EPS:
            hits.extend((ss[i], ss[j]))
        elif ci * cj <= 0 and ci != cj:
            t = ci / (ci - cj)
            hits.append(ss[i] + t * (ss[j] - ss[i]))
    if not hits:
        raise PreconditionError("sweep line misses the cell")
    smin, smax = min(hits), max(hits)
    lo = (smin * d[0] + c * nm[0], smin * d[1] + c * nm[1])
    hi = (smax * d[0] + c * nm[0], smax * d[1] + c * nm[1])
    return lo, hi


@dataclass(frozen=True)
class SweepPath:
    """Boustrophedon path for one convex cell.

    `lines` holds the sweep chords in offset order, each as (low, high)
    endpoints along the sweep direction. `waypoints` is the traversal for
    endpoint pair 0; the other admissible (start, end) pairs are obtained
    by starting from the other end of the first line and/or reversing the
    line order.
    """

    waypoints: tuple[Point, ...]
    sweep_count: int
    turn_count: int
    length: float
    endpoint_pairs: tuple[Pair, Pair, Pair, Pair]
    lines: tuple[tuple[Point, Point], ...]
    line_lengths: tuple[float, ...]
    direction: Point
    degenerate: bool = False

    def waypoints_for_pair(self, pair_index: int) -> list[Point]:
        return _traverse(self.lines, pair_index)


def _traverse(lines, pair_index: int) -> list[Point]:
    """Waypoints for one of the four admissible endpoint pairs."""
    if pair_index not in (0, 1, 2, 3):
        raise PreconditionError(f"pair index {pair_index} out of range")
    ordered = list(lines) if pair_index < 2 else list(reversed(lines))
    low_first = pair_index % 2 == 0
    out: list[Point] = []
    for k, (lo, hi) in enumerate(ordered):
        a, b = (lo, hi) if (k % 2 == 0) == low_first else (hi, lo)
        out.extend((a, b))
    return out


def _build_lines(poly: Polygon, r: float, direction: Point):
    dx, dy = direction
    L = math.hypot(dx, dy)
    d = (dx / L, dy / L)
    nm = (-d[1], d[0])
    cs = [p[0] * nm[0] + p[1] * nm[1] for p in poly.vertices]
    cmin, cmax = min(cs), max(cs)
    span = cmax - cmin
    degenerate = r >= span
    if not degenerate:
        count = math.ceil(span / r - 1e-12)
        # Offsets beyond the far boundary are dropped, not clamped: the
        # previous line's footprint already reaches past the boundary.
        offsets = [cmin + (k + 0.5) * r for k in range(count)
                   if (k + 0.5) * r <= span]
        degenerate = not offsets
    if degenerate:
        offsets = [cmin + span / 2.0]
    lines = [_chord(poly, d, nm, c) for c in offsets]
    return lines, d, span, degenerate


def boustrophedon(cell, r: float, direction: Point | None = None) -> SweepPath:
    """Generate the boustrophedon sweep for a convex cell.

    Lines are parallel to the cell's minimum-span edge (or to `direction`
    when given), at perpendicular offsets (k + 1/2) * r from the low side.
    When r >= span a single midline pass is emitted and flagged degenerate.
    """
    if r <= 0:
        raise PreconditionError("coverage radius must be > 0")
    poly = _cell_polygon(cell)
    if direction is None:
        _, direction, _ = msa_direction(poly)
    lines, d, span, degenerate = _build_lines(poly, r, direction)
    n = len(lines)
    pairs = []
    for idx in range(4):
        wp = _traverse(lines, idx)
        pairs.append((wp[0], wp[-1]))
    waypoints = _traverse(lines, 0)
    return SweepPath(
        waypoints=tuple(waypoints),
        sweep_count=n,
        turn_count=n - 1,
        length=path_length(waypoints),
        endpoint_pairs=tuple(pairs),
        lines=tuple(lines),
        line_lengths=tuple(math.dist(lo, hi) for lo, hi in lines),
        direction=d,
        degenerate=degenerate,
    )


def endpoint_pairs(cell, r: float) -> tuple[Pair, Pair, Pair, Pair]:
    """The four admissible (start, end) pairs of a cell's sweep.

    Order: [first-line-low, first-line-high, last-line-low, last-line-high]
    along the sweep direction; each end point is fully determined by its
    start point.
    """
    return boustrophedon(cell, r).endpoint_pairs


def turn_count(path: SweepPath) -> int:
    """Number of U-turn transitions: one per connector between sweep lines."""
    return path.sweep_count - 1
