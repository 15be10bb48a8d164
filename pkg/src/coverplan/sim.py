"""Deterministic 2D world: waypoint follower, ray-cast LiDAR, replan loop.

The robot is a point with instantaneous heading changes; pose is ground
truth plus optional seeded Gaussian noise (there is no SLAM estimator).
Scripted world events exercise the online replanning logic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from skimage import draw

from . import replan as replan_mod
from .covergrid import CoverageGrid, OccupancyGrid
from .errors import CoverPlanError, PreconditionError
from .geometry import Point, Polygon, point_in_polygon
from .planner import plan_coverage
from .stitch import CoveragePlan


@dataclass(frozen=True)
class LidarSpec:
    beams: int = 180
    max_range: float = 30.0
    noise_sigma: float = 0.0


@dataclass(frozen=True)
class RobotSpec:
    speed: float = 1.0
    coverage_radius: float = 0.25
    pose_noise_sigma: float = 0.0


@dataclass(frozen=True)
class WorldEvent:
    time: float
    op: str  # "add-obstacle" | "move-boundary"
    polygon: Polygon


@dataclass(frozen=True)
class WorldSpec:
    boundary: Polygon
    events: tuple[WorldEvent, ...] = ()
    lidar: LidarSpec = LidarSpec()
    robot: RobotSpec = RobotSpec()

    def __post_init__(self):
        times = [e.time for e in self.events]
        if times != sorted(times):
            raise PreconditionError("world events must be sorted by time")

    def boundary_at(self, t: float) -> Polygon:
        boundary = self.boundary
        for e in self.events:
            if e.op == "move-boundary" and e.time <= t:
                boundary = e.polygon
        return boundary

    def obstacles_at(self, t: float) -> list[Polygon]:
        return [e.polygon for e in self.events
                if e.op == "add-obstacle" and e.time <= t]

    def segments_at(self, t: float) -> np.ndarray:
        # Boundary loops stay CCW and obstacle loops are reversed so that
        # solid material is always on the right of each directed segment.
        segs = []
        pts = self.boundary_at(t).vertices
        n = len(pts)
        segs.extend(((pts[i], pts[(i + 1) % n]) for i in range(n)))
        for poly in self.obstacles_at(t):
            pts = poly.vertices[::-1]
            n = len(pts)
            segs.extend(((pts[i], pts[(i + 1) % n]) for i in range(n)))
        return np.asarray(segs, dtype=float)

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "boundary": self.boundary.to_json_dict(),
            "events": [
                {"time": e.time, "op": e.op, "polygon": e.polygon.to_json_dict()}
                for e in self.events
            ],
            "lidar": {"beams": self.lidar.beams,
                      "max_range": self.lidar.max_range,
                      "noise_sigma": self.lidar.noise_sigma},
            "robot": {"speed": self.robot.speed,
                      "coverage_radius": self.robot.coverage_radius,
                      "pose_noise_sigma": self.robot.pose_noise_sigma},
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "WorldSpec":
        lidar = obj.get("lidar", {})
        robot = obj.get("robot", {})
        return cls(
            boundary=Polygon.from_json_dict(obj["boundary"]),
            events=tuple(
                WorldEvent(time=float(e["time"]), op=e["op"],
                           polygon=Polygon.from_json_dict(e["polygon"]))
                for e in obj.get("events", ())
            ),
            lidar=LidarSpec(
                beams=int(lidar.get("beams", 180)),
                max_range=float(lidar.get("max_range", 30.0)),
                noise_sigma=float(lidar.get("noise_sigma", 0.0)),
            ),
            robot=RobotSpec(
                speed=float(robot.get("speed", 1.0)),
                coverage_radius=float(robot.get("coverage_radius", 0.25)),
                pose_noise_sigma=float(robot.get("pose_noise_sigma", 0.0)),
            ),
        )


def _pose_in_free_space(world: WorldSpec, pose: Point, t: float) -> bool:
    if point_in_polygon(world.boundary_at(t), pose, boundary_tol=1e-9) == "outside":
        return False
    for obs in world.obstacles_at(t):
        if point_in_polygon(obs, pose) == "inside":
            return False
    return True


def lidar_scan(pose: Point, segments: np.ndarray, beams: int,
               max_range: float, rng: np.random.Generator | None = None,
               noise_sigma: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Ranges for evenly spaced bearings, clamped to max_range.

    `segments` is an (M, 2, 2) array of occluder endpoints. Returns
    (angles, ranges).
    """
    if beams < 8:
        raise PreconditionError("need at least 8 beams")
    angles = 2.0 * np.pi * np.arange(beams) / beams
    ux = np.cos(angles)
    uy = np.sin(angles)
    a = segments[:, 0, :]  # (M, 2)
    b = segments[:, 1, :]
    ex = b[:, 0] - a[:, 0]
    ey = b[:, 1] - a[:, 1]
    ox = a[:, 0] - pose[0]
    oy = a[:, 1] - pose[1]
    # o + t*u = a + s*e; denom = cross(u, e)
    denom = ux[:, None] * ey[None, :] - uy[:, None] * ex[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (ox[None, :] * ey[None, :] - oy[None, :] * ex[None, :]) / denom
        s = (ox[None, :] * uy[:, None] - oy[None, :] * ux[:, None]) / denom
    # A grazing hit (t ~ 0, pose on the segment) counts only when the beam
    # points into the solid side, which segments_at keeps on the right of
    # the segment direction; otherwise beams leaving a wall the robot
    # stands on would pass straight through it.
    ahead = (t > 1e-9) | ((t > -1e-9) & (denom > 0))
    valid = (np.abs(denom) > 1e-12) & ahead & (s >= -1e-9) & (s <= 1 + 1e-9)
    t = np.where(valid, t, np.inf)
    ranges = np.clip(t.min(axis=1), 0.0, max_range)
    if noise_sigma > 0 and rng is not None:
        ranges = np.clip(ranges + rng.normal(0.0, noise_sigma, beams),
                         0.0, max_range)
    return angles, ranges


def integrate_scan(occ: OccupancyGrid, pose: Point, angles: np.ndarray,
                   ranges: np.ndarray, max_range: float) -> None:
    """Mark scanned space free and beam endpoints occupied.

    Each beam corridor is marched at half-cell steps; with three or more
    beams the star polygon spanned by consecutive endpoints is filled as
    well, so the space between beams is not left unknown. Clamped beams
    (range at max_range) leave no occupied endpoint. Endpoints of adjacent
    beams with similar ranges are treated as one continuous surface and
    joined by a rasterized occupied segment, closing the gaps that open up
    between endpoints at long range.
    """
    res = occ.frame.resolution
    step = res / 2.0
    h, w = occ.frame.height, occ.frame.width
    x0, y0 = occ.frame.origin
    if len(angles) >= 3:
        exs = pose[0] + ranges * np.cos(angles)
        eys = pose[1] + ranges * np.sin(angles)
        rows = (eys - y0) / res - 0.5
        cols = (exs - x0) / res - 0.5
        rr, cc = draw.polygon(rows, cols, shape=(h, w))
        sel = occ.state[rr, cc] == 0  # UNKNOWN
        occ.state[rr[sel], cc[sel]] = 1  # FREE
    for ang, rng_ in zip(angles, ranges):
        if rng_ <= 0:
            continue
        free_len = max(rng_ - step, 0.0)
        count = int(free_len / step) + 1
        ts = np.linspace(0.0, free_len, count)
        xs = pose[0] + ts * math.cos(ang)
        ys = pose[1] + ts * math.sin(ang)
        jj = np.floor((xs - x0) / res).astype(int)
        ii = np.floor((ys - y0) / res).astype(int)
        ok = (ii >= 0) & (ii < h) & (jj >= 0) & (jj < w)
        ii, jj = ii[ok], jj[ok]
        sel = occ.state[ii, jj] == 0  # UNKNOWN
        occ.state[ii[sel], jj[sel]] = 1  # FREE
        if rng_ < max_range - 1e-9:
            ex = pose[0] + rng_ * math.cos(ang)
            ey = pose[1] + rng_ * math.sin(ang)
            occ.mark_occupied_at(int((ey - y0) // res), int((ex - x0) // res))
    if len(angles) < 2:
        return
    dtheta = 2.0 * math.pi / len(angles)
    for i in range(len(angles)):
        j = (i + 1) % len(angles)
        ri, rj = ranges[i], ranges[j]
        if ri >= max_range - 1e-9 or rj >= max_range - 1e-9:
            continue
        if ri <= 0 or rj <= 0:
            continue
        # a range jump between neighbors means a depth discontinuity, not
        # a surface to bridge
        if abs(ri - rj) > 0.2 + 2.0 * max(ri, rj) * dtheta:
            continue
        pi = (pose[0] + ri * math.cos(angles[i]),
              pose[1] + ri * math.sin(angles[i]))
        pj = (pose[0] + rj * math.cos(angles[j]),
              pose[1] + rj * math.sin(angles[j]))
        rr, cc = draw.line(int((pi[1] - y0) // res), int((pi[0] - x0) // res),
                           int((pj[1] - y0) // res), int((pj[0] - x0) // res))
        ok = (rr >= 0) & (rr < h) & (cc >= 0) & (cc < w)
        occ.state[rr[ok], cc[ok]] = 2  # OCCUPIED


@dataclass
class SimConfig:
    dt: float = 0.1
    scan_every: int = 5       # ticks between LiDAR scans
    replan_every: int = 20    # ticks between area-error checks
    grid_resolution: float | None = None  # default: coverage_radius / 5
    simplify_tol: float = 0.10
    dist_tol: float | None = None  # default: 3 * grid resolution
    max_replans: int = 10
    max_time: float | None = None


@dataclass
class SimState:
    t: float
    pose: Point
    heading: float
    cursor: int
    occ: OccupancyGrid
    cov: CoverageGrid
    plan: CoveragePlan
    reference: Polygon
    threshold: float
    rng: np.random.Generator
    tick_index: int = 0
    done: bool = False
    replan_events: list = field(default_factory=list)
    forced_replans: list = field(default_factory=list)
    trajectory: list = field(default_factory=list)


def init_state(world: WorldSpec, plan: CoveragePlan, seed: int,
               config: SimConfig) -> SimState:
    r = world.robot.coverage_radius
    res = config.grid_resolution or r / 5.0
    cov = CoverageGrid.from_polygon(world.boundary, res, margin=2 * r)
    occ = OccupancyGrid.like(cov)
    start = plan.waypoints[0]
    state = SimState(
        t=0.0,
        pose=start,
        heading=0.0,
        cursor=0,
        occ=occ,
        cov=cov,
        plan=plan,
        reference=world.boundary,
        threshold=replan_mod.replan_threshold(plan, r),
        rng=np.random.default_rng(seed),
    )
    _scan(state, world)
    return state


def _scan(state: SimState, world: WorldSpec) -> None:
    if not _pose_in_free_space(world, state.pose, state.t):
        raise PreconditionError(f"robot pose {state.pose} left free space")
    segs = world.segments_at(state.t)
    angles, ranges = lidar_scan(state.pose, segs, world.lidar.beams,
                                world.lidar.max_range, state.rng,
                                world.lidar.noise_sigma)
    integrate_scan(state.occ, state.pose, angles, ranges,
                   world.lidar.max_range)


def _segment_blocked(a: Point, b: Point, obstacles: list[Polygon]) -> bool:
    from .geometry import _segments_intersect
    mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    for obs in obstacles:
        if point_in_polygon(obs, b) == "inside":
            return True
        if point_in_polygon(obs, mid) == "inside":
            return True
        n = len(obs.vertices)
        for i in range(n):
            if _segments_intersect(a, b, *obs.edge(i)):
                return True
    return False


def _rebuild_plan(state: SimState, world: WorldSpec, config: SimConfig,
                  boundary: Polygon, pose: Point) -> None:
    r = world.robot.coverage_radius
    plan = plan_coverage(boundary, pose, r)
    state.plan = plan
    state.cursor = 0
    state.reference = boundary
    state.threshold = replan_mod.replan_threshold(plan, r)


def _estimate(state: SimState, world: WorldSpec) -> Point:
    sigma = world.robot.pose_noise_sigma
    if sigma <= 0:
        return state.pose
    dx, dy = state.rng.normal(0.0, sigma, 2)
    return (state.pose[0] + dx, state.pose[1] + dy)


def tick(state: SimState, world: WorldSpec, config: SimConfig) -> SimState:
    """Advance one step: move, sense, stamp, periodically check for replan."""
    if config.dt <= 0:
        raise PreconditionError("dt must be > 0")
    r = world.robot.coverage_radius
    t_next = state.t + config.dt
    obstacles = world.obstacles_at(t_next)

    # Move toward the next waypoint, stamping along the way.
    remaining = world.robot.speed * config.dt
    wp = state.plan.waypoints
    touched = []
    blocked = False
    while remaining > 1e-12 and state.cursor < len(wp):
        target = wp[state.cursor]
        if _segment_blocked(state.pose, target, obstacles):
            blocked = True
            break
        d = math.dist(state.pose, target)
        if d <= 1e-12:
            state.cursor += 1
            continue
        step = min(remaining, d, r / 2 if r > 0 else d)
        f = step / d
        state.heading = math.atan2(target[1] - state.pose[1],
                                   target[0] - state.pose[0])
        state.pose = (state.pose[0] + f * (target[0] - state.pose[0]),
                      state.pose[1] + f * (target[1] - state.pose[1]))
        touched.append(state.pose)
        remaining -= step
        if math.dist(state.pose, target) <= 1e-12:
            state.cursor += 1

    state.t = t_next
    state.tick_index += 1
    est = _estimate(state, world)

    for p in touched:
        state.cov.stamp(p, r)
    if not touched:
        state.cov.stamp(est, r)

    if state.tick_index % config.scan_every == 0:
        _scan(state, world)

    replan_done = False
    if blocked and len(state.replan_events) + len(state.forced_replans) < config.max_replans:
        try:
            observed = replan_mod.extract_boundary(
                state.occ, seed=est, simplify_tol=config.simplify_tol)
            action = replan_mod.decide(math.inf, 0.0, est, observed)
            _rebuild_plan(state, world, config, observed, action.pose)
            state.forced_replans.append({"t": state.t, "reason": "blocked"})
            replan_done = True
        except CoverPlanError:
            state.cursor += 1  # skip the unreachable waypoint

    if (not replan_done and state.tick_index % config.replan_every == 0
            and len(state.replan_events) < config.max_replans):
        res = state.cov.frame.resolution
        dist_tol = config.dist_tol or 3 * res
        try:
            observed = replan_mod.extract_boundary(
                state.occ, seed=est, simplify_tol=config.simplify_tol)
            ae = replan_mod.evaluate(observed, state.reference, dist_tol,
                                     state.threshold)
            if ae.replan:
                action = replan_mod.decide(ae.error, state.threshold, est,
                                           observed)
                state.replan_events.append({
                    "t": state.t,
                    "error": ae.error,
                    "threshold": state.threshold,
                    "new_polygon": observed.to_json_dict(),
                })
                _rebuild_plan(state, world, config, observed, action.pose)
        except CoverPlanError:
            pass

    if state.cursor >= len(state.plan.waypoints):
        state.done = True
    state.trajectory.append((state.t, est[0], est[1],
                             state.cov.coverage_ratio()))
    return state


@dataclass(frozen=True)
class SimReport:
    trajectory: tuple
    replan_events: tuple
    forced_replans: tuple
    coverage_ratio: float
    duration: float
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "seed": self.seed,
            "duration": self.duration,
            "coverage_ratio": self.coverage_ratio,
            "replan_events": list(self.replan_events),
            "forced_replans": list(self.forced_replans),
            "trajectory": [[t, x, y, c] for t, x, y, c in self.trajectory],
        }


def run(world: WorldSpec, plan: CoveragePlan, seed: int = 0,
        config: SimConfig | None = None) -> SimReport:
    """Run a full simulation; deterministic for a given (world, plan, seed)."""
    config = config or SimConfig()
    state = init_state(world, plan, seed, config)
    if config.max_time is not None:
        max_time = config.max_time
    else:
        base = plan.total_length / max(world.robot.speed, 1e-9)
        max_time = base * (config.max_replans + 2) + 60.0
    while not state.done and state.t < max_time:
        tick(state, world, config)
    return SimReport(
        trajectory=tuple(state.trajectory),
        replan_events=tuple(state.replan_events),
        forced_replans=tuple(state.forced_replans),
        coverage_ratio=state.cov.coverage_ratio(),
        duration=state.t,
        seed=seed,
    )
