"""Command-line surface: plan, simulate, report.

`plan` turns a polygon file into a stitched coverage plan (JSON + SVG),
`simulate` runs a plan through the deterministic world simulator, and
`report` builds the baseline-vs-new comparison table over a corpus of
polygon files. All artifacts are byte-reproducible for fixed inputs and
seed; figures carry no timestamps.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import svg
from .decompose import decompose_msa
from .errors import CoverPlanError, UnsupportedStartError
from .geometry import Polygon, simplify_closed
from .planner import baseline_turn_total, plan_coverage
from .sim import SimConfig, WorldSpec, run
from .stitch import stitch_classic, stitch_modified
from .sweep import boustrophedon


class SchemaError(ValueError):
    """Input file violates the expected schema; message is a JSON pointer."""


def _check(cond: bool, pointer: str, message: str) -> None:
    if not cond:
        raise SchemaError(f"{pointer}: {message}")


def _load_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"/: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"/: invalid JSON in {path}: {exc}") from exc


def _parse_polygon(obj: dict, pointer: str = "") -> Polygon:
    _check(isinstance(obj, dict), pointer or "/", "expected an object")
    verts = obj.get("vertices")
    _check(isinstance(verts, list) and len(verts) >= 3,
           f"{pointer}/vertices", "expected a list of >= 3 [x, y] pairs")
    for k, v in enumerate(verts):
        _check(isinstance(v, (list, tuple)) and len(v) == 2
               and all(isinstance(c, (int, float)) for c in v),
               f"{pointer}/vertices/{k}", "expected an [x, y] pair")
    return Polygon(verts)


def _parse_world(obj: dict) -> WorldSpec:
    _check(isinstance(obj, dict), "/", "expected an object")
    _check(obj.get("schema") == 1, "/schema", "expected 1")
    _check("boundary" in obj, "/boundary", "missing")
    _parse_polygon(obj["boundary"], "/boundary")
    for k, ev in enumerate(obj.get("events", [])):
        _check(isinstance(ev, dict), f"/events/{k}", "expected an object")
        _check(ev.get("op") in ("add-obstacle", "move-boundary"),
               f"/events/{k}/op", "expected add-obstacle or move-boundary")
        _check(isinstance(ev.get("time"), (int, float)),
               f"/events/{k}/time", "expected a number")
        _check("polygon" in ev, f"/events/{k}/polygon", "missing")
        _parse_polygon(ev["polygon"], f"/events/{k}/polygon")
    return WorldSpec.from_json_dict(obj)


def _parse_start(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise SchemaError("/start: expected 'x,y'")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise SchemaError(f"/start: {exc}") from exc


def _write_json(path: Path, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_dir(args) -> Path:
    out = os.environ.get("COVERPLAN_OUT") or args.out
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _plan_json(polygon: Polygon, start, radius: float, plan) -> dict:
    obj = plan.to_json_dict()
    obj["polygon"] = polygon.to_json_dict()
    obj["start"] = [start[0], start[1]]
    obj["coverage_radius"] = radius
    return obj


def cmd_plan(args) -> int:
    out = _out_dir(args)
    raw = _parse_polygon(_load_json(Path(args.polygon)))
    polygon = Polygon(simplify_closed(raw.vertices, args.tolerance))
    start = _parse_start(args.start)
    r = args.radius

    cells = decompose_msa(polygon, start, r)
    sweeps = [boustrophedon(c, r) for c in cells]
    plan = stitch_modified(cells, sweeps, start)
    _write_json(out / "plan.json", _plan_json(polygon, start, r, plan))
    svg.save(svg.render_plan(polygon, plan, start), out / "plan.svg")

    if args.baseline:
        classic = stitch_classic(cells, sweeps, start)
        _write_json(out / "plan_classic.json",
                    _plan_json(polygon, start, r, classic))
        svg.save(svg.render_plan(polygon, classic, start),
                 out / "plan_classic.svg")
        turns_base = baseline_turn_total(cells, r)
        print("vertices,turns_baseline,turns_new,length_classic,length_new")
        print(f"{len(polygon)},{turns_base},{plan.turn_total},"
              f"{classic.total_length:.6f},{plan.total_length:.6f}")
    return 0


def cmd_simulate(args) -> int:
    out = _out_dir(args)
    world = _parse_world(_load_json(Path(args.world)))
    plan_obj = _load_json(Path(args.plan))
    _check(plan_obj.get("schema") == 1, "/schema", "expected 1")
    _check("polygon" in plan_obj, "/polygon", "missing")
    _check("start" in plan_obj, "/start", "missing")
    _check(isinstance(plan_obj.get("coverage_radius"), (int, float)),
           "/coverage_radius", "expected a number")
    polygon = _parse_polygon(plan_obj["polygon"], "/polygon")
    start = tuple(map(float, plan_obj["start"]))
    # Replanning rebuilds paths from scratch, so the plan is re-derived
    # from its recorded inputs rather than deserialized waypoint by
    # waypoint; both roads lead to the same deterministic plan.
    plan = plan_coverage(polygon, start, float(plan_obj["coverage_radius"]))

    config = SimConfig(grid_resolution=args.resolution,
                       simplify_tol=args.tolerance)
    report = run(world, plan, seed=args.seed, config=config)

    _write_json(out / "report.json", report.to_json_dict())
    svg.save(svg.render_trajectory(world.boundary, report.trajectory,
                                   start=plan.waypoints[0],
                                   events=report.replan_events),
             out / "traj.svg")
    with open(out / "metrics.csv", "w", encoding="utf-8") as fh:
        fh.write("t,x,y,coverage_ratio\n")
        for t, x, y, c in report.trajectory:
            fh.write(f"{t:.6f},{x:.6f},{y:.6f},{c:.6f}\n")
    print(f"coverage_ratio={report.coverage_ratio:.4f} "
          f"replan_events={len(report.replan_events)} "
          f"duration={report.duration:.1f}")
    return 0


def report_rows(polygons, radius: float):
    """Comparison rows (vertices, turns and lengths) for a polygon list."""
    rows = []
    for poly in polygons:
        start = poly.vertices[0]
        cells = decompose_msa(poly, start, radius)
        sweeps = [boustrophedon(c, radius) for c in cells]
        modified = stitch_modified(cells, sweeps, start)
        classic = stitch_classic(cells, sweeps, start)
        rows.append((len(poly), baseline_turn_total(cells, radius),
                     modified.turn_total, classic.total_length,
                     modified.total_length))
    return rows


def _report_figure(rows, path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    idx = range(len(rows))
    labels = [str(r[0]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    w = 0.4
    ax1.bar([i - w / 2 for i in idx], [r[1] for r in rows], w,
            label="baseline", color="#9ecae1")
    ax1.bar([i + w / 2 for i in idx], [r[2] for r in rows], w,
            label="new", color="#3182bd")
    ax1.set_xticks(list(idx), labels)
    ax1.set_xlabel("vertices")
    ax1.set_ylabel("turns")
    ax1.legend()
    ax2.bar([i - w / 2 for i in idx], [r[3] for r in rows], w,
            label="classic", color="#a1d99b")
    ax2.bar([i + w / 2 for i in idx], [r[4] for r in rows], w,
            label="new", color="#31a354")
    ax2.set_xticks(list(idx), labels)
    ax2.set_xlabel("vertices")
    ax2.set_ylabel("path length [m]")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_report(args) -> int:
    out = _out_dir(args)
    corpus = Path(args.corpus)
    files = sorted(corpus.glob("*.json"))
    if not files:
        print(f"error: no polygon files in {corpus}", file=sys.stderr)
        return 1
    polygons = [_parse_polygon(_load_json(f)) for f in files]
    rows = report_rows(polygons, args.radius)
    with open(out / "table.csv", "w", encoding="utf-8") as fh:
        fh.write("vertices,turns_baseline,turns_new,"
                 "length_classic,length_new\n")
        for v, tb, tn, lc, ln in rows:
            fh.write(f"{v},{tb},{tn},{lc:.6f},{ln:.6f}\n")
    _report_figure(rows, out / "table.png")
    for line in (out / "table.csv").read_text().splitlines():
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverplan",
        description="Coverage path planning: decompose, sweep, stitch, "
                    "simulate and compare.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--radius", type=float, default=0.25,
                       help="coverage radius in meters (default 0.25)")
        p.add_argument("--tolerance", type=float, default=0.10,
                       help="simplification tolerance in meters (default 0.10)")
        p.add_argument("--resolution", type=float, default=None,
                       help="grid resolution in meters (default radius/5)")
        p.add_argument("--seed", type=int, default=0,
                       help="random seed (default 0)")
        p.add_argument("--out", default=".",
                       help="output directory (env COVERPLAN_OUT overrides)")

    p_plan = sub.add_parser("plan", help="plan coverage for a polygon file")
    p_plan.add_argument("polygon", help="polygon JSON file")
    p_plan.add_argument("--start", required=True,
                        help="start point 'x,y' on or outside the boundary")
    p_plan.add_argument("--baseline", action="store_true",
                        help="also emit the centroid-tour baseline plan")
    common(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_sim = sub.add_parser("simulate", help="simulate a plan in a world")
    p_sim.add_argument("world", help="world JSON file")
    p_sim.add_argument("plan", help="plan JSON file from `coverplan plan`")
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("report", help="comparison table over a corpus")
    p_rep.add_argument("corpus", help="directory of polygon JSON files")
    common(p_rep)
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedStartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CoverPlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
