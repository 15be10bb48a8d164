"""Convex decomposition by ear clipping with greedy sweep-saving merges.

The polygon is clipped starting from the vertex nearest the chosen start
point; each clipped triangle is merged into the current cell whenever the
merged cell stays convex and shortens the combined sweep path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import sweep
from .errors import PreconditionError, UnsupportedStartError
from .geometry import (
    EPS,
    Point,
    Polygon,
    is_convex,
    is_ear,
    msa_direction,
    point_in_polygon,
)


@dataclass(frozen=True)
class ConvexCell:
    """Convex sub-polygon with provenance and cached sweep-direction data."""

    polygon: Polygon
    source_triangles: frozenset[int]
    msa: tuple[int, Point, float]  # (edge_index, direction, span)


@dataclass(frozen=True)
class StartSpec:
    """Classified start point; `kind` is derived, never caller-asserted."""

    point: Point
    kind: str  # "on-boundary" | "outside"


def classify_start(p: Polygon, p0: Point, boundary_tol: float = 1e-6) -> StartSpec:
    """Accept boundary/outside start points; reject interior ones."""
    where = point_in_polygon(p, p0, boundary_tol=boundary_tol)
    if where == "inside":
        raise UnsupportedStartError(
            "start point lies inside the target area, which is not supported; "
            "choose a point on the boundary or outside the area"
        )
    kind = "on-boundary" if where == "boundary" else "outside"
    return StartSpec(point=(float(p0[0]), float(p0[1])), kind=kind)


def nearest_vertex(p: Polygon, p0: Point) -> int:
    """Index of the vertex nearest to p0; ties broken by lowest index."""
    return min(range(len(p.vertices)),
               key=lambda i: (math.dist(p.vertices[i], p0), i))


def _shared_edge(a: Polygon, b: Polygon) -> tuple[int, int]:
    """Indices (i, j) such that edge i of `a` equals edge j of `b` reversed."""
    matches = []
    for i in range(len(a.vertices)):
        p, q = a.edge(i)
        for j in range(len(b.vertices)):
            u, v = b.edge(j)
            if math.dist(p, v) <= EPS and math.dist(q, u) <= EPS:
                matches.append((i, j))
    if len(matches) != 1:
        raise PreconditionError(
            f"cells must share exactly one full edge, found {len(matches)}"
        )
    return matches[0]


def merge_polygons(a: Polygon, b: Polygon) -> Polygon:
    """Union of two cells sharing exactly one full edge (edge deleted)."""
    if a is b or a.vertices == b.vertices:
        raise PreconditionError("cannot merge a cell with itself")
    i, j = _shared_edge(a, b)
    na, nb = len(a.vertices), len(b.vertices)
    out = [a.vertices[(i + 1 + k) % na] for k in range(na)]
    out += [b.vertices[(j + 2 + k) % nb] for k in range(nb - 2)]
    return Polygon(out)


def _sweep_length(poly: Polygon, r: float) -> float:
    return sweep.boustrophedon(poly, r).length


def _merge_saving(a: Polygon, b: Polygon, merged: Polygon, r: float) -> float:
    if not is_convex(merged):
        return 0.0
    return _sweep_length(a, r) + _sweep_length(b, r) - _sweep_length(merged, r)


def merge_cost(a: ConvexCell, b: ConvexCell, r: float) -> float:
    """Sweep-path saving from merging two edge-adjacent convex cells.

    Zero when the union is not convex; otherwise the combined sweep length
    of the two cells minus the merged cell's sweep length, at radius r.
    """
    merged = merge_polygons(a.polygon, b.polygon)
    return _merge_saving(a.polygon, b.polygon, merged, r)


def decompose_msa(p: Polygon, p0: Point, r: float) -> list[ConvexCell]:
    """Partition a simple CCW polygon into convex, sweep-efficient cells.

    Ear clipping starts at the vertex nearest the (boundary or outside)
    start point. At each step the two frontier vertices of the current
    cell are candidate ears; the one whose merge saves the most sweep
    length is merged when the saving is positive, otherwise the current
    cell is committed and a fresh cell begins.
    """
    if r <= 0:
        raise PreconditionError("coverage radius must be > 0")
    classify_start(p, p0)
    pts = p.vertices
    n = len(pts)
    nxt = {i: (i + 1) % n for i in range(n)}
    prv = {i: (i - 1) % n for i in range(n)}
    alive = set(range(n))

    def ring_list(start: int) -> list[int]:
        out = [start]
        k = nxt[start]
        while k != start:
            out.append(k)
            k = nxt[k]
        return out

    def find_ear_from(start: int) -> int:
        ring = ring_list(start)
        for pos in range(len(ring)):
            if is_ear(pts, ring, pos):
                return ring[pos]
        raise PreconditionError("no ear found in remaining ring")

    def is_ring_ear(v: int) -> bool:
        ring = ring_list(v)
        return is_ear(pts, ring, 0)

    def clip(v: int) -> None:
        alive.discard(v)
        a, b = prv[v], nxt[v]
        nxt[a] = b
        prv[b] = a
        del nxt[v], prv[v]

    cells: list[ConvexCell] = []
    clip_index = 0

    def commit(chain: list[int], tris: set[int]) -> None:
        poly = Polygon([pts[i] for i in chain])
        cells.append(ConvexCell(polygon=poly,
                                source_triangles=frozenset(tris),
                                msa=msa_direction(poly)))

    # Seed the first cell at the ear nearest the start point.
    a_star = nearest_vertex(p, p0)
    if not is_ring_ear(a_star):
        a_star = find_ear_from(a_star)
    chain = [prv[a_star], a_star, nxt[a_star]]
    tris = {clip_index}
    clip_index += 1
    clip(a_star)

    while clip_index < n - 2:
        chain_poly = Polygon([pts[i] for i in chain])
        candidates = []  # (saving, order, k, merged_chain)
        # Forward frontier (CCW successor side), then backward frontier.
        for order, k in enumerate((chain[-1], chain[0])):
            if not is_ring_ear(k):
                continue
            if order == 0:
                merged_chain = chain + [nxt[k]]
            else:
                merged_chain = [prv[k]] + chain
            tri_poly = Polygon([pts[prv[k]], pts[k], pts[nxt[k]]])
            merged_poly = Polygon([pts[i] for i in merged_chain])
            saving = _merge_saving(chain_poly, tri_poly, merged_poly, r)
            candidates.append((saving, order, k, merged_chain))
        if not candidates:
            # Neither frontier is clippable: commit and restart at the
            # nearest ear in CCW order.
            commit(chain, tris)
            k = find_ear_from(nxt[chain[-1]])
            chain = [prv[k], k, nxt[k]]
            tris = {clip_index}
            clip_index += 1
            clip(k)
            continue
        candidates.sort(key=lambda t: (-t[0], t[1]))
        saving, order, k, merged_chain = candidates[0]
        if saving > 0:
            chain = merged_chain
            tris.add(clip_index)
        else:
            commit(chain, tris)
            chain = [prv[k], k, nxt[k]]
            tris = {clip_index}
        clip_index += 1
        clip(k)

    commit(chain, tris)
    return cells
