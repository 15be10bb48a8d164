"""Raster bookkeeping of covered area and observed space.

Two fixed-resolution grids share one frame: a coverage grid tracking which
target-area cells the robot footprint has visited, and an occupancy grid
tracking free/occupied/unknown space built from range scans. Coverage
credit uses cell centers throughout so ratios stay comparable.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .geometry import Point, Polygon

log = logging.getLogger(__name__)

UNKNOWN = 0
FREE = 1
OCCUPIED = 2


def _inside_mask(poly: Polygon, origin: Point, resolution: float,
                 width: int, height: int) -> np.ndarray:
    """Cell-center membership mask for the target polygon."""
    xs = origin[0] + (np.arange(width) + 0.5) * resolution
    ys = origin[1] + (np.arange(height) + 0.5) * resolution
    X, Y = np.meshgrid(xs, ys)
    inside = np.zeros((height, width), dtype=bool)
    pts = poly.vertices
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        cond = (y1 > Y) != (y2 > Y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = x1 + (Y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= cond & (xi > X)
    return inside


@dataclass
class GridFrame:
    origin: Point
    resolution: float
    width: int
    height: int

    @classmethod
    def around(cls, poly: Polygon, resolution: float, margin: float = 0.0):
        if resolution <= 0:
            raise PreconditionError("resolution must be > 0")
        x0, y0, x1, y1 = poly.bounds()
        x0 -= margin
        y0 -= margin
        width = int(math.ceil((x1 + margin - x0) / resolution)) + 1
        height = int(math.ceil((y1 + margin - y0) / resolution)) + 1
        return cls(origin=(x0, y0), resolution=resolution,
                   width=width, height=height)

    def cell_of(self, pt: Point) -> tuple[int, int]:
        j = int(math.floor((pt[0] - self.origin[0]) / self.resolution))
        i = int(math.floor((pt[1] - self.origin[1]) / self.resolution))
        return i, j

    def in_bounds(self, pt: Point) -> bool:
        i, j = self.cell_of(pt)
        return 0 <= i < self.height and 0 <= j < self.width

    def centers(self):
        xs = self.origin[0] + (np.arange(self.width) + 0.5) * self.resolution
        ys = self.origin[1] + (np.arange(self.height) + 0.5) * self.resolution
        return np.meshgrid(xs, ys)


@dataclass
class CoverageGrid:
    """Boolean raster of covered target-area cells."""

    frame: GridFrame
    inside: np.ndarray
    covered: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.covered is None:
            self.covered = np.zeros_like(self.inside, dtype=bool)

    @classmethod
    def from_polygon(cls, poly: Polygon, resolution: float,
                     margin: float = 0.0) -> "CoverageGrid":
        frame = GridFrame.around(poly, resolution, margin)
        inside = _inside_mask(poly, frame.origin, resolution,
                              frame.width, frame.height)
        return cls(frame=frame, inside=inside)

    def copy(self) -> "CoverageGrid":
        return CoverageGrid(frame=self.frame, inside=self.inside,
                            covered=self.covered.copy())

    def _disk_window(self, pose: Point, r: float):
        """(row slice, col slice, disk mask) covering the stamp footprint."""
        res = self.frame.resolution
        x0, y0 = self.frame.origin
        i0 = max(0, int(math.floor((pose[1] - r - y0) / res)))
        i1 = min(self.frame.height, int(math.ceil((pose[1] + r - y0) / res)) + 1)
        j0 = max(0, int(math.floor((pose[0] - r - x0) / res)))
        j1 = min(self.frame.width, int(math.ceil((pose[0] + r - x0) / res)) + 1)
        xs = x0 + (np.arange(j0, j1) + 0.5) * res
        ys = y0 + (np.arange(i0, i1) + 0.5) * res
        dx2 = (xs - pose[0]) ** 2
        dy2 = (ys - pose[1]) ** 2
        disk = dy2[:, None] + dx2[None, :] <= r * r
        return slice(i0, i1), slice(j0, j1), disk

    def stamp(self, pose: Point, r: float) -> float:
        """Mark all inside-cells within r of pose; returns the newly
        covered area in square meters."""
        if r <= 0:
            raise PreconditionError("coverage radius must be > 0")
        if not self.frame.in_bounds(pose):
            log.info("stamp pose %s outside grid bounds; ignored", pose)
            return 0.0
        si, sj, disk = self._disk_window(pose, r)
        new = disk & self.inside[si, sj] & ~self.covered[si, sj]
        count = int(new.sum())
        self.covered[si, sj] |= new
        return count * self.frame.resolution ** 2

    def stamp_count(self, pose: Point, r: float) -> int:
        """Flip count a stamp at `pose` would produce, without mutating."""
        if not self.frame.in_bounds(pose):
            return 0
        si, sj, disk = self._disk_window(pose, r)
        return int((disk & self.inside[si, sj] & ~self.covered[si, sj]).sum())

    def coverage_ratio(self) -> float:
        total = int(self.inside.sum())
        if total == 0:
            raise PreconditionError("coverage grid has an empty inside mask")
        return int((self.covered & self.inside).sum()) / total

    def to_pgm(self, path) -> None:
        img = np.where(self.covered & self.inside, 255, 0).astype(np.uint8)
        _write_pgm(path, img)


def stamp(grid: CoverageGrid, pose: Point, r: float) -> float:
    return grid.stamp(pose, r)


def coverage_ratio(grid: CoverageGrid) -> float:
    return grid.coverage_ratio()


def default_headings(count: int = 16) -> list[float]:
    return [2.0 * math.pi * k / count for k in range(count)]


def best_heading(grid: CoverageGrid, pose: Point, step: float, r: float,
                 candidates: list[float] | None = None) -> tuple[float, float]:
    """Heading whose next stamp would newly cover the most area.

    Each candidate angle is evaluated by counting the cells a stamp at
    pose + step * (cos, sin) would flip; ties go to the smallest angle.
    Returns (angle, newly covered area).
    """
    if candidates is None:
        candidates = default_headings()
    if not candidates:
        raise PreconditionError("need at least one candidate heading")
    best_angle = None
    best_count = -1
    for theta in candidates:
        probe = (pose[0] + step * math.cos(theta),
                 pose[1] + step * math.sin(theta))
        count = grid.stamp_count(probe, r)
        if count > best_count:
            best_count = count
            best_angle = theta
    return best_angle, best_count * grid.frame.resolution ** 2


@dataclass
class OccupancyGrid:
    """Ternary raster: unknown until observed, then free or occupied."""

    frame: GridFrame
    state: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.state is None:
            self.state = np.full((self.frame.height, self.frame.width),
                                 UNKNOWN, dtype=np.uint8)

    @classmethod
    def like(cls, grid: CoverageGrid) -> "OccupancyGrid":
        return cls(frame=grid.frame)

    def copy(self) -> "OccupancyGrid":
        return OccupancyGrid(frame=self.frame, state=self.state.copy())

    def mark_free(self, cells: np.ndarray) -> None:
        """Upgrade unknown cells to free; occupied cells stay occupied."""
        self.state[cells & (self.state == UNKNOWN)] = FREE

    def mark_free_at(self, i: int, j: int) -> None:
        if 0 <= i < self.frame.height and 0 <= j < self.frame.width:
            if self.state[i, j] == UNKNOWN:
                self.state[i, j] = FREE

    def mark_occupied_at(self, i: int, j: int) -> None:
        if 0 <= i < self.frame.height and 0 <= j < self.frame.width:
            self.state[i, j] = OCCUPIED

    def to_pgm(self, path) -> None:
        img = np.zeros(self.state.shape, dtype=np.uint8)
        img[self.state == FREE] = 255
        img[self.state == OCCUPIED] = 128
        _write_pgm(path, img)


def _write_pgm(path, img: np.ndarray) -> None:
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        # row 0 is the bottom of the world frame; PGM rows go top-down
        fh.write(np.flipud(img).tobytes())
