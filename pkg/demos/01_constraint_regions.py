"""
Constraint regions from a marker scene
======================================

Walks through the whole construction on the canonical vertical-marker
scene: extremal points, the bounding boxes BH/BV, the chord-circle
parameters, and the resulting no-view regions RNH, RNV and their union
RNA on the camera-height plane. Writes region.svg next to this script.
"""

from pathlib import Path

import numpy as np

from fovregion import (
    build_bh,
    build_bv,
    compute_extrema,
    load_scene,
    regions_for_scene,
)
from fovregion.render import render_svg

HERE = Path(__file__).resolve().parent
scene = load_scene(HERE.parent / "scenes" / "vertical_square.json")
cam = scene.camera

print("scene: one vertical square marker, corners (+-0.5, 2, {1, 2})")
print(f"camera: apertures {cam.theta} x {cam.phi} rad, "
      f"image {cam.width} x {cam.height}, optical center at z = {cam.h_c}")

# The extremal feature points drive everything downstream.
ext = compute_extrema(scene)
print("\nextrema:")
for name, p in (("left", ext.p_l), ("right", ext.p_r),
                ("top", ext.p_t), ("bottom", ext.p_b)):
    print(f"  {name:>6}-most point: {np.round(p, 3)}")

# The boxes coincide with the marker rectangle here because the scene is
# coplanar: every ray projection is the identity.
bh = build_bh(scene, ext)
bv = build_bv(scene, ext)
print("\nBH corners:")
print(np.round(bh.corners, 3))

bh2, bv2, rnh, rnv, rna = regions_for_scene(scene)

# Chord circle over the box width: all points of the arc of radius r see
# the chord under the full horizontal aperture; d is the distance from
# the chord to the circle center.
print(f"\nchord l = {rnh.chord.l:.3f} m  ->  r = {rnh.chord.r:.4f} m, "
      f"d = {rnh.chord.d:.4f} m")
print(f"RNH: rectangle 2b x c = {2 * rnh.b:.3f} x {rnh.c:.3f} m plus a half "
      f"ellipse with semi-axes a = {rnh.a:.3f}, b = {rnh.b:.3f} m")
print(f"     back edge H1H2 from {np.round(rnh.h1, 3)} to {np.round(rnh.h2, 3)}")
print(f"RNV: exists = {rnv.exists}, case {rnv.case_id}, "
      f"{len(rnv.cap_ellipses)} end caps")

# Membership is analytic; the polygon is only for export and planning.
probe = np.array([
    [0.0, 1.9, cam.h_c],    # just in front of the marker: inside
    [0.0, 1.3, cam.h_c],    # near the ellipse apex: still inside
    [0.0, 1.0, cam.h_c],    # past the apex: outside
])
for p in probe:
    print(f"  RNA contains {np.round(p[:2], 2)}? {rna.contains(p)}")

out = HERE / "01_region.svg"
render_svg(scene, rnh, rnv, rna, out)
print(f"\nwrote {out}")
