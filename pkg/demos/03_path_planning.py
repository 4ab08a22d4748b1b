"""
Keeping markers in view while driving
=====================================

Two experiments on robot paths, mirroring the margin-trace idea:

1. A straight path toward a wide marker. The robot first enters RNH
   (the horizontal margins cross zero), then RNV (the vertical ones
   follow). The trace shows the characteristic sign pattern.

2. The two-marker scene. The straight line from start to goal cuts
   through RNA, so the planner wraps the inflated region with a
   visibility-graph path; every sample along it keeps positive margins.
"""

from pathlib import Path

from fovregion import (
    load_scene,
    plan_boundary_path,
    regions_for_scene,
    simulate,
    trajectory_from_waypoints,
    write_trace_csv,
)
from fovregion.render import render_svg

HERE = Path(__file__).resolve().parent

# --- 1. straight crossing -------------------------------------------------
scene = load_scene(HERE.parent / "scenes" / "billboard.json")
_, _, rnh, rnv, rna = regions_for_scene(scene)
traj = trajectory_from_waypoints([[0.0, -0.5], [0.0, 2.3]], speed=0.5)
records = simulate(traj, scene, rna, dt=0.05)
write_trace_csv(records, HERE / "03_straight_trace.csv")

t_h = next(r.t for r in records if min(r.left, r.right) < 0)
t_v = next(r.t for r in records if min(r.top, r.bottom) < 0)
print("straight path toward the billboard:")
print(f"  horizontal margins cross zero at t = {t_h:.2f} s (entering RNH)")
print(f"  vertical margins cross zero at t = {t_v:.2f} s (entering RNV)")
for r in records:
    if abs(r.t - t_h) < 0.051 or abs(r.t - t_v) < 0.051:
        print(f"    t={r.t:5.2f}  y={r.position[1]:+.2f}  "
              f"L={r.left:7.1f} R={r.right:7.1f} "
              f"T={r.top:7.1f} B={r.bottom:7.1f}")

# --- 2. planned path around RNA --------------------------------------------
scene2 = load_scene(HERE.parent / "scenes" / "two_markers.json")
_, _, rnh2, rnv2, rna2 = regions_for_scene(scene2)
start, goal = (2.2, -1.8), (0.2, 3.65)

straight = trajectory_from_waypoints([start, goal], speed=0.5)
straight_recs = simulate(straight, scene2, rna2, dt=0.05)
worst_straight = min(r.min_margin for r in straight_recs)
crosses = any(r.in_rna for r in straight_recs)

planned = plan_boundary_path(start, goal, rna2, clearance=0.05, speed=0.5)
planned_recs = simulate(planned, scene2, rna2, dt=0.05)
worst_planned = min(r.min_margin for r in planned_recs)
write_trace_csv(planned_recs, HERE / "03_planned_trace.csv")
render_svg(scene2, rnh2, rnv2, rna2, HERE / "03_plan.svg",
           extra_paths=[planned.positions])

print("\ntwo-marker scene, start", start, "goal", goal)
print(f"  straight line crosses RNA: {crosses}; worst margin "
      f"{worst_straight:.1f} px")
print(f"  planned path: {len(planned.positions)} waypoints, worst margin "
      f"{worst_planned:.1f} px (positive everywhere)")
print(f"  wrote {HERE / '03_planned_trace.csv'} and {HERE / '03_plan.svg'}")
