"""Construction of the bounding rectangles BH and BV.

Both boxes live in the plane with the averaged marker normal. BH has its
non-horizontal sides through the left/right-most feature points and its
horizontal sides through the (ray-projected) top/bottom-most points; BV
swaps the roles. Projections are taken along the ray from each point to
the reference optical center, so for a fully coplanar scene every
projection is the identity and the box is just the bounding rectangle in
the marker plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBox, RayParallelToPlane
from .scene import Extrema, Scene, average_unit_normal, compute_extrema, compute_frame

_PLANE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RectBox:
    """Oriented rectangle A-B-C-D (top-left, top-right, bottom-right,
    bottom-left when viewed from the camera side)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    frame: tuple  # (e0, e1, e2)
    kind: str     # "BH" or "BV"

    def __post_init__(self):
        e0, e1, e2 = self.frame
        corners = np.array([self.a, self.b, self.c, self.d])
        off = (corners - corners[0]) @ e0
        if np.max(np.abs(off)) > 1e-9:
            raise DegenerateBox(f"{self.kind}: corners not coplanar with the frame normal")
        ab = self.b - self.a
        dc = self.c - self.d
        ad = self.d - self.a
        bc = self.c - self.b
        if np.linalg.norm(np.cross(ab, dc)) > 1e-9 or np.linalg.norm(np.cross(ad, bc)) > 1e-9:
            raise DegenerateBox(f"{self.kind}: opposite sides not parallel")
        if abs(float(ab @ ad)) > 1e-9:
            raise DegenerateBox(f"{self.kind}: adjacent sides not perpendicular")

    @property
    def corners(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    @property
    def width(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    @property
    def height(self) -> float:
        return float(np.linalg.norm(self.d - self.a))


def project_onto_box_plane(p: np.ndarray, anchor: np.ndarray, direction: np.ndarray,
                           n: np.ndarray):
    """Project p along `direction` onto the plane through `anchor` with normal n.

    Returns (projected point, m) where projected = p + m * direction.
    """
    p = np.asarray(p, dtype=float)
    direction = np.asarray(direction, dtype=float)
    denom = float(direction @ n)
    if abs(denom) <= 1e-9:
        raise RayParallelToPlane("projection ray is parallel to the box plane")
    m = float((np.asarray(anchor, dtype=float) - p) @ n) / denom
    return p + m * direction, m


def _project_to_plane(point, anchor, n, center):
    """Ray-projection of a feature point toward the reference optical center."""
    off = float((point - anchor) @ n)
    if abs(off) <= _PLANE_TOL:
        return np.asarray(point, dtype=float)
    projected, _ = project_onto_box_plane(point, anchor, center - point, n)
    return projected


def _corners_from_bounds(anchor, e1, e2, lo1, hi1, lo2, hi2):
    a = anchor + lo1 * e1 + hi2 * e2
    b = anchor + hi1 * e1 + hi2 * e2
    c = anchor + hi1 * e1 + lo2 * e2
    d = anchor + lo1 * e1 + lo2 * e2
    return a, b, c, d


def _projected_bounds(scene: Scene, anchor, frame):
    """Bounds, in the in-plane axes, of every feature point ray-projected
    onto the plane through `anchor`.

    When the projections preserve the extremal ordering (always the case
    for coplanar scenes, where they are identities), the bounds are set by
    the extremal points themselves and the sides pass through them; taking
    the envelope over all points keeps the box meaningful when a
    projection overtakes an extremal point.
    """
    e0, e1, e2 = frame
    center = scene.reference_center
    proj = np.array([_project_to_plane(p, anchor, e0, center)
                     for p in scene.all_points()])
    u = (proj - anchor) @ e1
    v = (proj - anchor) @ e2
    return float(u.min()), float(u.max()), float(v.min()), float(v.max())


def build_bh(scene: Scene, extrema: Extrema = None) -> RectBox:
    """Rectangle for the horizontal constraint.

    The plane is anchored at the left-most point; every feature point is
    projected onto it along its ray toward the reference optical center
    and the rectangle bounds the projections.
    """
    n = average_unit_normal(scene.markers)
    e0, e1, e2 = compute_frame(n)
    if extrema is None:
        extrema = compute_extrema(scene)
    anchor = extrema.p_l
    lo1, hi1, lo2, hi2 = _projected_bounds(scene, anchor, (e0, e1, e2))
    if hi1 - lo1 < 1e-9 or hi2 - lo2 < 1e-9:
        raise DegenerateBox(f"BH is degenerate: width={hi1 - lo1:.3e}, height={hi2 - lo2:.3e}")
    a, b, c, d = _corners_from_bounds(anchor, e1, e2, lo1, hi1, lo2, hi2)
    return RectBox(a=a, b=b, c=c, d=d, frame=(e0, e1, e2), kind="BH")


def build_bv(scene: Scene, extrema: Extrema = None) -> RectBox:
    """Rectangle for the vertical constraint (same construction as the
    horizontal box, with the plane anchored at the top-most point)."""
    n = average_unit_normal(scene.markers)
    e0, e1, e2 = compute_frame(n)
    if extrema is None:
        extrema = compute_extrema(scene)
    anchor = extrema.p_t
    lo1, hi1, lo2, hi2 = _projected_bounds(scene, anchor, (e0, e1, e2))
    if hi1 - lo1 < 1e-9 or hi2 - lo2 < 1e-9:
        raise DegenerateBox(f"BV is degenerate: width={hi1 - lo1:.3e}, height={hi2 - lo2:.3e}")
    a, b, c, d = _corners_from_bounds(anchor, e1, e2, lo1, hi1, lo2, hi2)
    return RectBox(a=a, b=b, c=c, d=d, frame=(e0, e1, e2), kind="BV")
