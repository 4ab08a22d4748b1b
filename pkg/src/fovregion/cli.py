"""Command-line interface.

Subcommands: region, check, simulate, plan, oracle-compare. Exit codes:
0 success, 2 scene/validation error, 3 geometry degeneracy. Set
FOVREGION_LOG=DEBUG (or INFO, ...) for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .camera import best_pose_margins, oracle_compare
from .errors import FovRegionError, GeometryError, SceneFormatError
from .pathsim import (
    Trajectory,
    plan_boundary_path,
    simulate,
    trajectory_from_waypoints,
    write_trace_csv,
)
from .regions import contains, regions_for_scene
from .render import dump_json, region_document, render_svg
from .scene import Scene, load_scene

log = logging.getLogger("fovregion")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fovregion",
                                 description="Field-of-view constraint regions "
                                             "for a pan-tilt camera")
    ap.add_argument("--scene", required=True, help="scene JSON file")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--theta", type=float, default=None,
                    help="override horizontal aperture (rad)")
    ap.add_argument("--phi", type=float, default=None,
                    help="override vertical aperture (rad)")
    ap.add_argument("--hc", type=float, default=None,
                    help="override camera height (m)")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for any randomized sampling (none by default)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", help="compute RNH/RNV/RNA, write JSON + SVG")
    p.add_argument("--dump-boxes", action="store_true",
                   help="include BH/BV corners in the JSON")
    p.add_argument("--svg-scale", type=float, default=0.01,
                   help="meters per SVG pixel")

    p = sub.add_parser("check", help="membership and margins at a position")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.add_argument("--grid", type=int, default=64, help="pose grid per axis")

    p = sub.add_parser("simulate", help="simulate a trajectory, write trace CSV")
    p.add_argument("path", help="trajectory JSON file")
    p.add_argument("--dt", type=float, default=0.05, help="sample period (s)")

    p = sub.add_parser("plan", help="plan a path around RNA, write waypoints + trace")
    p.add_argument("x0", type=float)
    p.add_argument("y0", type=float)
    p.add_argument("x1", type=float)
    p.add_argument("y1", type=float)
    p.add_argument("--clearance", type=float, default=0.05,
                   help="inflation of RNA (m)")
    p.add_argument("--speed", type=float, default=0.5, help="robot speed (m/s)")
    p.add_argument("--dt", type=float, default=0.01, help="trace sample period (s)")

    p = sub.add_parser("oracle-compare",
                       help="compare analytic RNA with the virtual-camera oracle")
    p.add_argument("--grid", type=int, default=100,
                   help="positions per axis of the comparison grid")
    p.add_argument("--pose-grid", type=int, default=64,
                   help="pan/tilt samples per axis in the oracle")
    p.add_argument("--window", type=float, nargs=4, default=None,
                   metavar=("X0", "X1", "Y0", "Y1"),
                   help="comparison window (default: region bounds + 1.5 m)")
    return ap


def _load_scene_with_overrides(args) -> Scene:
    scene = load_scene(args.scene)
    cam = scene.camera
    if args.theta is not None or args.phi is not None or args.hc is not None:
        cam = replace(cam,
                      theta=cam.theta if args.theta is None else args.theta,
                      phi=cam.phi if args.phi is None else args.phi,
                      h_c=cam.h_c if args.hc is None else args.hc)
        ref = scene.reference_center.copy()
        if args.hc is not None:
            ref[2] = args.hc
        scene = Scene(markers=scene.markers, camera=cam, reference_center=ref)
    return scene


def _load_trajectory(path, speed_default: float = 0.5) -> Trajectory:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise SceneFormatError("trajectory file must be a JSON object")
    if "timed_waypoints" in doc:
        rows = np.asarray(doc["timed_waypoints"], dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 3:
            raise SceneFormatError("timed_waypoints must be rows of [t, x, y]")
        pos = np.column_stack([rows[:, 1], rows[:, 2], np.zeros(len(rows))])
        return Trajectory(times=rows[:, 0], positions=pos)
    if "points" in doc:
        pts = np.asarray(doc["points"], dtype=float)
        speed = float(doc.get("speed", speed_default))
        return trajectory_from_waypoints(pts, speed=speed)
    raise SceneFormatError("trajectory file needs 'timed_waypoints' or 'points'")


def _cmd_region(args, scene: Scene, out: Path) -> int:
    bh, bv, rnh, rnv, rna = regions_for_scene(scene)
    boxes = (bh, bv) if args.dump_boxes else None
    doc = region_document(rnh, rnv, rna, boxes=boxes)
    dump_json(doc, out / "region.json")
    render_svg(scene, rnh, rnv, rna, out / "region.svg",
               meters_per_px=args.svg_scale)
    log.info("wrote %s and %s", out / "region.json", out / "region.svg")
    return 0


def _cmd_check(args, scene: Scene, out: Path) -> int:
    bh, bv, rnh, rnv, rna = regions_for_scene(scene)
    p = np.array([args.x, args.y, scene.camera.h_c])
    pose, margins = best_pose_margins(p, scene, grid=args.grid)
    doc = {
        "position": [args.x, args.y, scene.camera.h_c],
        "in_rnh": contains(rnh, p),
        "in_rnv": bool(rnv.exists and contains(rnv, p)),
        "in_rna": contains(rna, p),
        "min_margin_px": margins.min,
        "margins": {"left": margins.left, "right": margins.right,
                    "top": margins.top, "bottom": margins.bottom},
        "best_pan": pose.pan,
        "best_tilt": pose.tilt,
    }
    dump_json(doc, out / "check.json")
    json.dump(doc, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_simulate(args, scene: Scene, out: Path) -> int:
    bh, bv, rnh, rnv, rna = regions_for_scene(scene)
    traj = _load_trajectory(args.path)
    records = simulate(traj, scene, rna, dt=args.dt)
    write_trace_csv(records, out / "trace.csv")
    log.info("wrote %s (%d samples)", out / "trace.csv", len(records))
    return 0


def _cmd_plan(args, scene: Scene, out: Path) -> int:
    bh, bv, rnh, rnv, rna = regions_for_scene(scene)
    traj = plan_boundary_path((args.x0, args.y0), (args.x1, args.y1), rna,
                              clearance=args.clearance, speed=args.speed)
    doc = {
        "points": [[float(p[0]), float(p[1])] for p in traj.positions],
        "speed": args.speed,
        "clearance": args.clearance,
    }
    dump_json(doc, out / "plan.json")
    records = simulate(traj, scene, rna, dt=args.dt)
    write_trace_csv(records, out / "plan_trace.csv")
    render_svg(scene, rnh, rnv, rna, out / "plan.svg",
               extra_paths=[traj.positions])
    worst = min(r.min_margin for r in records)
    log.info("planned path: %d waypoints, worst margin %.1f px",
             len(traj.positions), worst)
    return 0


def _cmd_oracle_compare(args, scene: Scene, out: Path) -> int:
    bh, bv, rnh, rnv, rna = regions_for_scene(scene)
    if args.window is not None:
        window = tuple(args.window)
    else:
        rings = rna.boundary_rings()
        allxy = np.vstack(rings) if rings else np.zeros((1, 2))
        x0, y0 = allxy.min(axis=0) - 1.5
        x1, y1 = allxy.max(axis=0) + 1.5
        side = max(x1 - x0, y1 - y0)
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        window = (cx - side / 2, cx + side / 2, cy - side / 2, cy + side / 2)
    rec, summary = oracle_compare(scene, rna, window=window, n=args.grid,
                                  grid=args.pose_grid)
    with open(out / "oracle_compare.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,y,analytic_in_rna,oracle_visible,min_margin_px\n")
        for i in range(len(rec["x"])):
            fh.write("%.6g,%.6g,%d,%d,%.6g\n" % (
                rec["x"][i], rec["y"][i], int(rec["analytic_in_rna"][i]),
                int(rec["oracle_visible"][i]), rec["min_margin_px"][i]))
    dump_json(summary, out / "oracle_summary.json")
    log.info("agreement %.4f, violations %d", summary["agreement"],
             summary["violations_outside_rna"])
    return 0


_COMMANDS = {
    "region": _cmd_region,
    "check": _cmd_check,
    "simulate": _cmd_simulate,
    "plan": _cmd_plan,
    "oracle-compare": _cmd_oracle_compare,
}


def main(argv=None) -> int:
    level = os.environ.get("FOVREGION_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr,
                        level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        scene = _load_scene_with_overrides(args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](args, scene, out)
    except SceneFormatError as exc:
        print(f"fovregion: scene error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"fovregion: geometry error: {exc}", file=sys.stderr)
        return 3
    except FovRegionError as exc:
        print(f"fovregion: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fovregion: io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
