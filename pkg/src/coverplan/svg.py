"""Minimal SVG rendering for plans and trajectories.

Hand-rolled emitter: the figures are simple layered polylines, and plain
string assembly keeps the output byte-reproducible. No timestamps or
library version strings are written.
"""
from __future__ import annotations

from .errors import PreconditionError
from .geometry import Polygon
from .stitch import CoveragePlan

CELL_COLORS = ("#9ecae1", "#a1d99b", "#fdae6b", "#bcbddc", "#fc9272",
               "#c7e9c0", "#fdd0a2", "#dadaeb")


def _fmt(x: float) -> str:
    # fixed precision keeps files small and diffable
    return f"{x:.3f}"


class _Canvas:
    def __init__(self, bounds, margin: float = 1.0, scale: float = 40.0):
        x0, y0, x1, y1 = bounds
        self.x0 = x0 - margin
        self.y1 = y1 + margin
        self.scale = scale
        self.width = (x1 - x0 + 2 * margin) * scale
        self.height = (y1 - y0 + 2 * margin) * scale
        self.parts: list[str] = []

    def pt(self, p) -> tuple[float, float]:
        # world y grows up, SVG y grows down
        return ((p[0] - self.x0) * self.scale, (self.y1 - p[1]) * self.scale)

    def polygon(self, pts, fill: str, stroke: str, width: float = 1.5,
                opacity: float = 1.0) -> None:
        coords = " ".join("%s,%s" % tuple(map(_fmt, self.pt(p))) for p in pts)
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}" fill-opacity="{_fmt(opacity)}"/>')

    def polyline(self, pts, stroke: str, width: float = 1.5,
                 dash: str | None = None) -> None:
        coords = " ".join("%s,%s" % tuple(map(_fmt, self.pt(p))) for p in pts)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}"{extra}/>')

    def circle(self, p, radius: float, fill: str) -> None:
        cx, cy = self.pt(p)
        self.parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" '
            f'fill="{fill}"/>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{_fmt(self.width)}" height="{_fmt(self.height)}" '
                f'viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">')
        return "\n".join([head, *self.parts, "</svg>"]) + "\n"


def render_plan(polygon: Polygon, plan: CoveragePlan, start) -> str:
    """Plan figure: polygon, cells, sweep lines, stitched path, start marker."""
    if not plan.cells:
        raise PreconditionError("plan has no cells")
    xs = [p[0] for p in polygon.vertices] + [start[0]]
    ys = [p[1] for p in polygon.vertices] + [start[1]]
    canvas = _Canvas((min(xs), min(ys), max(xs), max(ys)))
    canvas.polygon(polygon.vertices, fill="#f7f7f7", stroke="#252525",
                   width=2.0)
    for i, cell in enumerate(plan.cells):
        canvas.polygon(cell.polygon.vertices,
                       fill=CELL_COLORS[i % len(CELL_COLORS)],
                       stroke="#636363", width=0.8, opacity=0.45)
    for sw in plan.sweeps:
        for lo, hi in sw.lines:
            canvas.polyline([lo, hi], stroke="#969696", width=0.7, dash="4,3")
    canvas.polyline(plan.waypoints, stroke="#08519c", width=1.6)
    canvas.circle(start, 5.0, fill="#cb181d")
    return canvas.render()


def render_trajectory(polygon: Polygon, trajectory, start=None,
                      events=()) -> str:
    """Trajectory figure: polygon, robot track, optional replan markers."""
    pts = [(x, y) for _, x, y, _ in trajectory]
    if len(pts) < 2:
        raise PreconditionError("trajectory needs >= 2 samples")
    xs = [p[0] for p in polygon.vertices] + [p[0] for p in pts]
    ys = [p[1] for p in polygon.vertices] + [p[1] for p in pts]
    canvas = _Canvas((min(xs), min(ys), max(xs), max(ys)))
    canvas.polygon(polygon.vertices, fill="#f7f7f7", stroke="#252525",
                   width=2.0)
    canvas.polyline(pts, stroke="#08519c", width=1.2)
    if start is not None:
        canvas.circle(start, 5.0, fill="#cb181d")
    for ev in events:
        t = ev.get("t")
        nearest = min(trajectory, key=lambda row: abs(row[0] - t))
        canvas.circle((nearest[1], nearest[2]), 4.0, fill="#e6550d")
    return canvas.render()


def save(text: str, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
