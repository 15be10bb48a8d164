"""Stitch per-cell sweeps into one continuous coverage path.

Two strategies: greedy chaining through the cells' admissible start/end
pairs (the default), and a centroid-tour baseline where cell order comes
from an exact shortest tour over cell centers.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .decompose import ConvexCell
from .errors import PreconditionError
from .geometry import Point
from .sweep import SweepPath, path_length


@dataclass(frozen=True)
class CoveragePlan:
    """Stitched global coverage path over a set of convex cells."""

    cells: tuple[ConvexCell, ...]
    sweeps: tuple[SweepPath, ...]
    cell_order: tuple[int, ...]
    chosen_pairs: tuple[int, ...]  # pair index per cell, aligned with cell_order
    waypoints: tuple[Point, ...]
    total_length: float
    transition_length: float
    turn_total: int

    @property
    def sweep_line_lengths(self) -> list[float]:
        return [L for sw in self.sweeps for L in sw.line_lengths]

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "cells": [c.polygon.to_json_dict() for c in self.cells],
            "order": list(self.cell_order),
            "pairs": list(self.chosen_pairs),
            "waypoints": [[x, y] for x, y in self.waypoints],
            "total_length": self.total_length,
            "transition_length": self.transition_length,
            "turns": self.turn_total,
            "sweep_lines": [
                [[list(lo), list(hi)] for lo, hi in sw.lines] for sw in self.sweeps
            ],
        }


@dataclass(frozen=True)
class ComparisonRow:
    """One table row comparing baseline and modified plans."""

    vertices: int
    turns_classic: int
    turns_new: int
    length_classic: float
    length_new: float


def pair_distance_matrix(sweeps: list[SweepPath]):
    """4n x 4n matrix of end-to-start jump distances between cell pairs.

    Entry [4i+a][4j+b] is the distance from the end point of pair `a` of
    cell i to the start point of pair `b` of cell j.
    """
    n = len(sweeps)
    mat = [[0.0] * (4 * n) for _ in range(4 * n)]
    for i, si in enumerate(sweeps):
        for a in range(4):
            end = si.endpoint_pairs[a][1]
            for j, sj in enumerate(sweeps):
                for b in range(4):
                    start = sj.endpoint_pairs[b][0]
                    mat[4 * i + a][4 * j + b] = math.dist(end, start)
    return mat


def _assemble(cells, sweeps, order, pair_waypoints) -> CoveragePlan:
    waypoints: list[Point] = []
    transition = 0.0
    for wp in pair_waypoints:
        if waypoints:
            transition += math.dist(waypoints[-1], wp[0])
        waypoints.extend(wp)
    turn_total = sum(sweeps[c].sweep_count - 1 for c in order)
    return CoveragePlan(
        cells=tuple(cells),
        sweeps=tuple(sweeps),
        cell_order=tuple(order),
        chosen_pairs=(),  # filled by callers
        waypoints=tuple(waypoints),
        total_length=path_length(waypoints),
        transition_length=transition,
        turn_total=turn_total,
    )


def _first_cell_index(cells, p0: Point) -> int:
    """Cell containing the polygon vertex nearest the start point."""
    best_v = None
    best_d = math.inf
    for cell in cells:
        for v in cell.polygon.vertices:
            d = math.dist(v, p0)
            if d < best_d - 1e-12:
                best_d = d
                best_v = v
    for i, cell in enumerate(cells):
        if any(math.dist(v, best_v) <= 1e-9 for v in cell.polygon.vertices):
            return i
    return 0


def stitch_modified(cells, sweeps, p0: Point) -> CoveragePlan:
    """Greedy chaining through the four start/end pairs of every cell.

    The first cell is the one containing the vertex nearest p0, entered at
    the pair whose start point is nearest p0; from then on the nearest
    unvisited start point is chosen, its paired end point becoming the
    origin for the next hop. Ties break to the lowest (cell, pair) index.
    """
    cells = list(cells)
    sweeps = list(sweeps)
    if not cells:
        raise PreconditionError("no cells to stitch")
    if len(cells) != len(sweeps):
        raise PreconditionError("cells and sweeps must align")

    first = _first_cell_index(cells, p0)
    pair0 = min(range(4),
                key=lambda a: (math.dist(sweeps[first].endpoint_pairs[a][0], p0), a))
    order = [first]
    pairs = [pair0]
    current_end = sweeps[first].endpoint_pairs[pair0][1]
    visited = {first}
    while len(visited) < len(cells):
        best = None
        for j in range(len(cells)):
            if j in visited:
                continue
            for b in range(4):
                d = math.dist(current_end, sweeps[j].endpoint_pairs[b][0])
                key = (d, j, b)
                if best is None or key < best:
                    best = key
        _, j, b = best
        order.append(j)
        pairs.append(b)
        visited.add(j)
        current_end = sweeps[j].endpoint_pairs[b][1]

    pair_wps = [sweeps[c].waypoints_for_pair(a) for c, a in zip(order, pairs)]
    plan = _assemble(cells, sweeps, order, pair_wps)
    return dataclasses.replace(plan, chosen_pairs=tuple(pairs))


def _held_karp_path(dist, start: int) -> list[int]:
    """Exact shortest open path visiting all nodes from `start`."""
    n = len(dist)
    others = [i for i in range(n) if i != start]
    m = len(others)
    if m == 0:
        return [start]
    # dp[(mask, last)] = (cost, parent)
    dp = {}
    for idx, node in enumerate(others):
        dp[(1 << idx, idx)] = (dist[start][node], None)
    for size in range(2, m + 1):
        for mask in range(1 << m):
            if bin(mask).count("1") != size:
                continue
            for idx in range(m):
                if not mask & (1 << idx):
                    continue
                pmask = mask ^ (1 << idx)
                best = None
                for pidx in range(m):
                    if not pmask & (1 << pidx):
                        continue
                    prev = dp.get((pmask, pidx))
                    if prev is None:
                        continue
                    cost = prev[0] + dist[others[pidx]][others[idx]]
                    if best is None or cost < best[0]:
                        best = (cost, pidx)
                if best is not None:
                    dp[(mask, idx)] = best
    full = (1 << m) - 1
    last = min(range(m), key=lambda idx: (dp[(full, idx)][0], idx))
    path = [last]
    mask = full
    while True:
        _, parent = dp[(mask, path[-1])]
        if parent is None:
            break
        mask ^= 1 << path[-1]
        path.append(parent)
    return [start] + [others[idx] for idx in reversed(path)]


def _nearest_neighbor_path(dist, start: int) -> list[int]:
    n = len(dist)
    order = [start]
    left = set(range(n)) - {start}
    while left:
        cur = order[-1]
        nxt = min(left, key=lambda j: (dist[cur][j], j))
        order.append(nxt)
        left.remove(nxt)
    return order


def stitch_classic(cells, sweeps, p0: Point,
                   exact_limit: int = 15) -> CoveragePlan:
    """Centroid-tour baseline stitching.

    Cell order minimizes the open tour over cell centroids starting at the
    cell nearest p0 (exact dynamic programming up to `exact_limit` cells,
    nearest-neighbor beyond). Each cell runs its default sweep (pair 0),
    reversed when its far end is closer to the previous end point.
    """
    cells = list(cells)
    sweeps = list(sweeps)
    if not cells:
        raise PreconditionError("no cells to stitch")
    if len(cells) != len(sweeps):
        raise PreconditionError("cells and sweeps must align")

    centroids = [c.polygon.centroid() for c in cells]
    start = min(range(len(cells)),
                key=lambda i: (math.dist(centroids[i], p0), i))
    dist = [[math.dist(a, b) for b in centroids] for a in centroids]
    if len(cells) <= exact_limit:
        order = _held_karp_path(dist, start)
    else:
        order = _nearest_neighbor_path(dist, start)

    pair_wps = []
    pairs = []
    prev_end = p0
    for c in order:
        wp_fwd = sweeps[c].waypoints_for_pair(0)
        wp_rev = list(reversed(wp_fwd))
        if math.dist(prev_end, wp_fwd[0]) <= math.dist(prev_end, wp_rev[0]):
            wp = wp_fwd
            pair = 0
        else:
            wp = wp_rev
            # reversed pair-0 traversal starts where pair 0 ends
            pair = 2 if sweeps[c].sweep_count % 2 == 0 else 3
        pair_wps.append(wp)
        pairs.append(pair)
        prev_end = wp[-1]

    plan = _assemble(cells, sweeps, order, pair_wps)
    return dataclasses.replace(plan, chosen_pairs=tuple(pairs))


def compare(classic: CoveragePlan, modified: CoveragePlan,
            vertices: int, turns_classic: int | None = None) -> ComparisonRow:
    """Comparison row between a baseline and a modified plan.

    `turns_classic` overrides the classic plan's own turn count when the
    baseline turn convention differs (e.g. fixed-direction sweeps).
    """
    if len(classic.cells) != len(modified.cells):
        raise PreconditionError("plans must cover the same cells")
    return ComparisonRow(
        vertices=vertices,
        turns_classic=classic.turn_total if turns_classic is None else turns_classic,
        turns_new=modified.turn_total,
        length_classic=classic.total_length,
        length_new=modified.total_length,
    )
