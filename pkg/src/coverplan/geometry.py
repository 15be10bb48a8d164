"""Core polygon primitives: area, convexity, simplification, triangulation, spans.

All coordinates are in meters. Polygons are simple, counter-clockwise vertex
loops; the closing edge (last vertex back to the first) is implicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DegenerateInputError, InvalidPolygonError, PreconditionError

Point = tuple[float, float]

# Absolute tolerance for coincidence / convexity predicates.  Input
# coordinates are assumed to stay below ~1e4 m, so an absolute epsilon
# is safe.
EPS = 1e-9


def _as_points(obj) -> list[Point]:
    if isinstance(obj, Polygon):
        return list(obj.vertices)
    return [(float(x), float(y)) for x, y in obj]


def signed_area(vertices) -> float:
    """Shoelace area of a vertex loop: positive iff counter-clockwise."""
    pts = _as_points(vertices)
    if len(pts) < 3:
        raise DegenerateInputError(f"need >= 3 vertices, got {len(pts)}")
    acc = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        acc += x1 * y2 - x2 * y1
    return 0.5 * acc


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Proper or improper intersection of two open segments."""

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > EPS:
            return 1
        if v < -EPS:
            return -1
        return 0

    o1 = orient(p1, p2, q1)
    o2 = orient(p1, p2, q2)
    o3 = orient(q1, q2, p1)
    o4 = orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True

    def on_seg(a, b, c):
        return (
            min(a[0], b[0]) - EPS <= c[0] <= max(a[0], b[0]) + EPS
            and min(a[1], b[1]) - EPS <= c[1] <= max(a[1], b[1]) + EPS
        )

    if o1 == 0 and on_seg(p1, p2, q1):
        return True
    if o2 == 0 and on_seg(p1, p2, q2):
        return True
    if o3 == 0 and on_seg(q1, q2, p1):
        return True
    if o4 == 0 and on_seg(q1, q2, p2):
        return True
    return False


@dataclass(frozen=True)
class Polygon:
    """Simple CCW vertex loop in meters.

    Invariants enforced on construction: at least 3 vertices, all finite,
    no two consecutive vertices coincident, positive signed area (CCW) and
    no self-intersection.
    """

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable[Sequence[float]], _validate: bool = True):
        pts = tuple((float(x), float(y)) for x, y in vertices)
        object.__setattr__(self, "vertices", pts)
        if _validate:
            self._validate()

    def _validate(self) -> None:
        pts = self.vertices
        if len(pts) < 3:
            raise DegenerateInputError(f"polygon needs >= 3 vertices, got {len(pts)}")
        for x, y in pts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InvalidPolygonError("non-finite vertex coordinate")
        n = len(pts)
        for i in range(n):
            j = (i + 1) % n
            if math.dist(pts[i], pts[j]) <= EPS:
                raise InvalidPolygonError(f"consecutive vertices {i},{j} coincide")
        if signed_area(pts) <= 0:
            raise InvalidPolygonError("vertex loop is clockwise or degenerate")
        # O(n^2) simple-polygon check: non-adjacent edges must not touch.
        for i in range(n):
            a1, a2 = pts[i], pts[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                b1, b2 = pts[j], pts[(j + 1) % n]
                if _segments_intersect(a1, a2, b1, b2):
                    raise InvalidPolygonError(f"edges {i} and {j} intersect")

    def __len__(self) -> int:
        return len(self.vertices)

    def edge(self, i: int) -> tuple[Point, Point]:
        n = len(self.vertices)
        return self.vertices[i % n], self.vertices[(i + 1) % n]

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    def centroid(self) -> Point:
        """Area centroid of the polygon."""
        a = 0.0
        cx = 0.0
        cy = 0.0
        pts = self.vertices
        for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
            w = x1 * y2 - x2 * y1
            a += w
            cx += (x1 + x2) * w
            cy += (y1 + y2) * w
        a *= 0.5
        return (cx / (6 * a), cy / (6 * a))

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def to_json_dict(self) -> dict:
        return {"vertices": [[x, y] for x, y in self.vertices]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Polygon":
        return cls(obj["vertices"])


@dataclass(frozen=True)
class EdgeSpan:
    """Span of one polygon edge: the longest altitude from that edge."""

    edge_index: int
    span: float
    farthest_vertex_index: int
    direction: Point  # unit vector along the edge


def _cross(ox, oy, ax, ay, bx, by) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def is_convex(p: Polygon) -> bool:
    """True iff every turn is left or collinear (cross >= -EPS)."""
    pts = p.vertices
    n = len(pts)
    for i in range(n):
        a, b, c = pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        if _cross(a[0], a[1], b[0], b[1], c[0], c[1]) < -EPS:
            return False
    return True


def point_segment_distance(pt: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    px, py = pt
    dx, dy = bx - ax, by - ay
    d2 = dx * dx + dy * dy
    if d2 <= EPS * EPS:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / d2
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def boundary_distance(p: Polygon, pt: Point) -> float:
    """Distance from a point to the polygon boundary."""
    n = len(p.vertices)
    return min(point_segment_distance(pt, *p.edge(i)) for i in range(n))


def nearest_boundary_point(p: Polygon, pt: Point) -> Point:
    """Closest point on the polygon boundary to `pt`."""
    best = None
    best_d = math.inf
    px, py = pt
    n = len(p.vertices)
    for i in range(n):
        (ax, ay), (bx, by) = p.edge(i)
        dx, dy = bx - ax, by - ay
        d2 = dx * dx + dy * dy
        t = 0.0 if d2 <= EPS * EPS else max(
            0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / d2)
        )
        cand = (ax + t * dx, ay + t * dy)
        d = math.hypot(px - cand[0], py - cand[1])
        if d < best_d:
            best_d = d
            best = cand
    return best


def point_in_polygon(p: Polygon, pt: Point, boundary_tol: float = 0.0) -> str:
    """Classify a point as 'inside', 'outside' or 'boundary'.

    A point within `boundary_tol` of any edge counts as 'boundary'.
    """
    if boundary_tol > 0 and boundary_distance(p, pt) <= boundary_tol:
        return "boundary"
    x, y = pt
    inside = False
    pts = p.vertices
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xi > x:
                inside = not inside
    return "inside" if inside else "outside"


def _perp_distance(pt: Point, a: Point, b: Point) -> float:
    """Distance from pt to the segment a-b; to the point when a == b."""
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    L = math.hypot(dx, dy)
    if L <= EPS:
        return math.hypot(pt[0] - ax, pt[1] - ay)
    return abs((pt[0] - ax) * dy - (pt[1] - ay) * dx) / L


def simplify_polyline(points: Sequence[Point], tolerance: float) -> list[Point]:
    """Douglas-Peucker simplification of an open polyline.

    Returns a subset of the input points (endpoints always kept); every
    removed point lies within `tolerance` of the simplified chain.
    """
    pts = _as_points(points)
    if len(pts) < 2:
        raise DegenerateInputError("polyline needs >= 2 points")
    if tolerance <= 0:
        raise PreconditionError("tolerance must be > 0")
    keep = [False] * len(pts)
    keep[0] = keep[-1] = True
    stack = [(0, len(pts) - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        a, b = pts[lo], pts[hi]
        worst = -1.0
        worst_i = -1
        for i in range(lo + 1, hi):
            d = _perp_distance(pts[i], a, b)
            if d > worst:
                worst = d
                worst_i = i
        if worst > tolerance:
            keep[worst_i] = True
            stack.append((lo, worst_i))
            stack.append((worst_i, hi))
    return [pt for pt, k in zip(pts, keep) if k]


def simplify_closed(points: Sequence[Point], tolerance: float) -> list[Point]:
    """Simplify a closed vertex loop.

    The loop is anchored at the vertex farthest from the centroid, then
    simplified as an open chain that returns to the anchor.
    """
    pts = _as_points(points)
    if len(pts) < 3:
        raise DegenerateInputError("closed loop needs >= 3 points")
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    anchor = max(range(len(pts)), key=lambda i: (
        (pts[i][0] - cx) ** 2 + (pts[i][1] - cy) ** 2, -i))
    rotated = pts[anchor:] + pts[:anchor]
    chain = simplify_polyline(rotated + [rotated[0]], tolerance)
    out = chain[:-1]
    if len(out) < 3:
        out = rotated[:3]
    return out


def _point_in_triangle(pt: Point, a: Point, b: Point, c: Point) -> bool:
    """Inside-or-on test (vertex coincidence excluded by the caller)."""
    d1 = _cross(a[0], a[1], b[0], b[1], pt[0], pt[1])
    d2 = _cross(b[0], b[1], c[0], c[1], pt[0], pt[1])
    d3 = _cross(c[0], c[1], a[0], a[1], pt[0], pt[1])
    return d1 >= -EPS and d2 >= -EPS and d3 >= -EPS


def is_ear(pts: Sequence[Point], ring: Sequence[int], pos: int) -> bool:
    """Whether ring position `pos` is a clippable ear of the ring polygon."""
    m = len(ring)
    ia, ib, ic = ring[pos - 1], ring[pos], ring[(pos + 1) % m]
    a, b, c = pts[ia], pts[ib], pts[ic]
    if _cross(a[0], a[1], b[0], b[1], c[0], c[1]) <= EPS:
        return False
    for k in ring:
        if k in (ia, ib, ic):
            continue
        if _point_in_triangle(pts[k], a, b, c):
            return False
    return True


def triangulate_ear_clip(p: Polygon, start_index: int = 0) -> list[tuple[int, int, int]]:
    """Ear-clip triangulation of a simple CCW polygon.

    Clipping starts at `start_index`; when the current candidate is not an
    ear the next vertex in CCW order is tried. Returns n-2 index triples
    into `p.vertices`, in clip order.
    """
    n = len(p.vertices)
    if not 0 <= start_index < n:
        raise PreconditionError(f"start_index {start_index} out of range")
    pts = p.vertices
    ring = list(range(n))
    ring = ring[start_index:] + ring[:start_index]
    triangles: list[tuple[int, int, int]] = []
    pos = 0
    while len(ring) > 3:
        m = len(ring)
        found = False
        for step in range(m):
            cand = (pos + step) % m
            if is_ear(pts, ring, cand):
                tri = (ring[cand - 1], ring[cand], ring[(cand + 1) % m])
                triangles.append(tri)
                ring.pop(cand)
                pos = cand % len(ring)
                found = True
                break
        if not found:
            raise InvalidPolygonError("no ear found; polygon is not simple")
    triangles.append((ring[0], ring[1], ring[2]))
    return triangles


def edge_span(p: Polygon, edge_index: int) -> EdgeSpan:
    """Longest altitude from the given edge of a convex polygon."""
    if not is_convex(p):
        raise PreconditionError("edge_span requires a convex polygon")
    n = len(p.vertices)
    if not 0 <= edge_index < n:
        raise PreconditionError(f"edge index {edge_index} out of range")
    a, b = p.edge(edge_index)
    dx, dy = b[0] - a[0], b[1] - a[1]
    L = math.hypot(dx, dy)
    ux, uy = dx / L, dy / L
    best = -1.0
    best_m = -1
    for m in range(n):
        if m == edge_index or m == (edge_index + 1) % n:
            continue
        v = p.vertices[m]
        d = abs((v[0] - a[0]) * uy - (v[1] - a[1]) * ux)
        if d > best:
            best = d
            best_m = m
    return EdgeSpan(edge_index=edge_index, span=best,
                    farthest_vertex_index=best_m, direction=(ux, uy))


def msa_direction(p: Polygon) -> tuple[int, Point, float]:
    """Edge whose span is minimal; ties broken by lowest edge index.

    Returns (edge_index, unit sweep direction, span). Sweeping parallel to
    this edge needs the fewest passes of any edge direction.
    """
    if not is_convex(p):
        raise PreconditionError("msa_direction requires a convex polygon")
    best: EdgeSpan | None = None
    for i in range(len(p.vertices)):
        es = edge_span(p, i)
        if best is None or es.span < best.span - EPS:
            best = es
    return best.edge_index, best.direction, best.span
