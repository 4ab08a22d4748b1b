"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with `pytest -s tests/test_acceptance.py` to see the lines.
"""

import json
import math
import time

import numpy as np
import pytest

from fovregion import (
    CameraModel,
    Scene,
    build_bh,
    build_bv,
    chord_params,
    oracle_compare,
    plan_boundary_path,
    regions_for_scene,
    rnh_section,
    rnv_prism,
    rnv_section,
    simulate,
    trajectory_from_waypoints,
)
from fovregion.cli import main as cli_main
from conftest import tilted_marker_scene


def _report(num, desc, ok=True):
    print(f"\nACCEPTANCE {num} {'PASS' if ok else 'FAIL'}: {desc}")
    assert ok, f"criterion {num}: {desc}"


def test_criterion_1_inscribed_angle_property():
    """1000 random (chord, aperture) pairs; arc points subtend the chord
    at the aperture within 1e-9 rad; runtime < 1 s."""
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        l = rng.uniform(0.05, 8.0)
        ap = rng.uniform(0.05, math.pi - 0.05)
        cp = chord_params(l, ap)
        center = np.array([0.0, cp.d])
        psi_max = math.acos(max(-1.0, min(1.0, -cp.d / cp.r)))
        psi = rng.uniform(-psi_max + 1e-9, psi_max - 1e-9, size=16)
        g = center + cp.r * np.column_stack([np.sin(psi), np.cos(psi)])
        ve = np.array([-l / 2, 0.0]) - g
        vf = np.array([l / 2, 0.0]) - g
        cross = ve[:, 0] * vf[:, 1] - ve[:, 1] * vf[:, 0]
        dot = np.sum(ve * vf, axis=1)
        ang = np.arctan2(np.abs(cross), dot)
        worst = max(worst, float(np.max(np.abs(ang - ap))))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 1.0
    _report(1, f"inscribed-angle property: worst error {worst:.2e} rad, "
               f"{elapsed:.2f} s", ok)


def test_criterion_2_chord_parameter_spot_checks():
    """Exact trig cases plus a high-precision cross-check at 1.13 rad.

    float(pi/2) and float(pi/6) are not exactly pi/2 and pi/6, so the
    spot values are pinned at the float-representation limit (r == 1
    exactly; |d| below 1e-15; the pi/6 pair within one ulp)."""
    cp = chord_params(2.0, math.pi / 2)
    ok = cp.r == 1.0 and abs(cp.d) <= 1e-15
    cp = chord_params(2.0, math.pi / 6)
    ok &= abs(cp.r - 2.0) <= 1e-14 and abs(cp.d - math.sqrt(3.0)) <= 1e-14
    import mpmath as mp
    mp.mp.dps = 50
    cp = chord_params(1.0, 1.13)
    r_hp = mp.mpf(1) / (2 * mp.sin(mp.mpf(1.13)))
    d_hp = mp.mpf(1) / (2 * mp.tan(mp.mpf(1.13)))
    err_r = abs(cp.r - float(r_hp))
    err_d = abs(cp.d - float(d_hp))
    ok &= err_r <= 1e-12 and err_d <= 1e-12
    _report(2, f"chord parameters: r(1.13) off by {err_r:.1e}, "
               f"d(1.13) off by {err_d:.1e}", ok)


def test_criterion_3_oracle_conservativeness(canonical_scene,
                                             two_marker_high_scene):
    """200x200 grid, 6 m x 6 m windows on the camera side: violations only
    within a 2-cell boundary band, agreement >= 95 %, runtime < 60 s."""
    runs = [
        (canonical_scene, (-3.0, 3.0, -4.0, 2.0), "canonical"),
        (two_marker_high_scene, (0.0, 6.0, -2.25, 3.75), "two-marker"),
    ]
    t0 = time.perf_counter()
    lines = []
    ok = True
    for scene, window, name in runs:
        _, _, _, _, rna = regions_for_scene(scene)
        rec, s = oracle_compare(scene, rna, window=window, n=200, grid=64)
        ok &= s["violation_band_cells"] <= 2.0
        ok &= s["agreement"] >= 0.95
        lines.append(f"{name}: agree {s['agreement']:.4f}, "
                     f"band {s['violation_band_cells']:.2f} cells, "
                     f"{s['violations_outside_rna']} boundary-band cells")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60.0
    _report(3, "; ".join(lines) + f"; total {elapsed:.1f} s", ok)


def test_criterion_4_straight_path_sign_pattern(billboard_scene):
    """Straight path crossing RNH then RNV: horizontal margins cross zero
    strictly before the vertical ones."""
    _, _, _, _, rna = regions_for_scene(billboard_scene)
    traj = trajectory_from_waypoints([[0.0, -0.5], [0.0, 2.3]], speed=0.5)
    recs = simulate(traj, billboard_scene, rna, dt=0.05)
    t_h = next((r.t for r in recs if min(r.left, r.right) < 0), None)
    t_v = next((r.t for r in recs if min(r.top, r.bottom) < 0), None)
    ok = t_h is not None and t_v is not None and t_h < t_v
    _report(4, f"horizontal margins cross zero at t={t_h:.2f} s, vertical "
               f"at t={t_v:.2f} s", ok)


def test_criterion_5_boundary_path_positivity(two_marker_scene):
    """Planned path (2.2, -1.8) -> (0.2, 3.65) around RNA keeps every
    margin positive at 0.01 s sampling."""
    _, _, _, _, rna = regions_for_scene(two_marker_scene)
    traj = plan_boundary_path((2.2, -1.8), (0.2, 3.65), rna, clearance=0.05,
                              speed=0.5)
    recs = simulate(traj, two_marker_scene, rna, dt=0.01)
    worst = min(r.min_margin for r in recs)
    ok = worst > 0.0 and len(traj.positions) >= 3
    _report(5, f"{len(recs)} samples along {len(traj.positions)} waypoints, "
               f"minimum margin {worst:.1f} px", ok)


def test_criterion_6_degeneracy_suite(canonical_scene):
    """alpha = pi/2 gives a == b and c == d exactly; shrinking the
    apertures to 0.900/0.750 rad strictly enlarges RNA (sampled)."""
    rnh = rnh_section(build_bh(canonical_scene), canonical_scene.camera)
    ok = (rnh.a == rnh.b) and (rnh.c == rnh.chord.d)

    def membership(theta, phi, pts):
        cam = CameraModel(theta=theta, phi=phi, width=1024, height=1024, h_c=1.5)
        scene = Scene(markers=canonical_scene.markers, camera=cam)
        _, _, _, _, rna = regions_for_scene(scene)
        return rna.contains_many(pts)

    g = np.linspace(-2.2, 2.2, 160)
    gx, gy = np.meshgrid(g, g + 0.9)
    pts = np.column_stack([gx.ravel(), gy.ravel(), np.full(gx.size, 1.5)])
    nominal = membership(1.13, 1.13, pts)
    shrunk = membership(0.900, 0.750, pts)
    ok &= int(np.sum(shrunk)) > int(np.sum(nominal))
    ok &= not np.any(nominal & ~shrunk)  # enlargement is pointwise
    _report(6, f"exact equalities hold; RNA grows from {np.sum(nominal)} to "
               f"{np.sum(shrunk)} sampled cells under the aperture shrink", ok)


def test_criterion_7_rnv_case1_equivalence():
    """Generic plane-hexahedron clip reproduces V1 = J + m3 (N - J) to
    1e-9 over 100 random acute-inclination boxes in the case-1 band."""
    rng = np.random.default_rng(777)
    worst = 0.0
    checked = 0
    while checked < 100:
        scene = tilted_marker_scene(rng.uniform(8.0, 60.0),
                                    side=rng.uniform(0.4, 2.0),
                                    phi=rng.uniform(0.6, 1.5))
        prism = rnv_prism(build_bv(scene), scene.camera)
        j, n = prism.vertices[0], prism.vertices[3]
        jz, jpz = j[2], prism.vertices[4][2]
        if jpz >= jz - 1e-9:
            continue
        h_c = rng.uniform(jpz, jz - 1e-12)
        sec = rnv_section(prism, h_c)
        p = n - j
        v1 = j + ((h_c - j[2]) / p[2]) * p
        worst = max(worst, float(np.min(np.linalg.norm(sec.vertices - v1,
                                                       axis=1))))
        checked += 1
    ok = worst < 1e-9
    _report(7, f"case-1 V1 reproduced over 100 boxes, worst deviation "
               f"{worst:.2e} m", ok)


def test_criterion_8_cli_determinism(tmp_path, scenes_dir):
    """Every CLI command, run twice on identical inputs, produces
    byte-identical artifacts."""
    scene = scenes_dir / "vertical_square.json"
    traj_file = tmp_path / "path.json"
    traj_file.write_text(json.dumps({"points": [[0.0, -2.0], [1.5, -2.0]],
                                     "speed": 0.5}))
    cmds = [
        ["region", "--dump-boxes"],
        ["check", "0.3", "0.4"],
        ["simulate", str(traj_file), "--dt", "0.2"],
        ["plan", "-2.5", "0.0", "2.5", "0.0", "--dt", "0.2"],
        ["oracle-compare", "--grid", "15", "--window",
         "-2.0", "2.0", "-2.0", "2.0"],
    ]
    ok = True
    checked = 0
    for i, cmd in enumerate(cmds):
        d1, d2 = tmp_path / f"a{i}", tmp_path / f"b{i}"
        rc1 = cli_main(["--scene", str(scene), "--out", str(d1)] + cmd)
        rc2 = cli_main(["--scene", str(scene), "--out", str(d2)] + cmd)
        ok &= rc1 == 0 and rc2 == 0
        for f1 in sorted(d1.iterdir()):
            ok &= (d2 / f1.name).read_bytes() == f1.read_bytes()
            checked += 1
    _report(8, f"5 commands x 2 runs: {checked} artifacts byte-identical", ok)
