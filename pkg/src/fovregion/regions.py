"""Planar constraint regions on Plane H: RNH, RNV and their union RNA.

The construction follows the inscribed-angle ("center angle") circle over a
chord: every point of the arc of radius r = l / (2 sin aperture) sees the
chord under exactly the aperture angle, and d = l / (2 tan aperture) is the
distance from the chord to the circle center. Sweeping those circles along
the box sides yields the 3D no-view solids; the regions here are their
(conservatively extended) cross-sections with the horizontal plane at the
camera height h_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boxes import RectBox
from .errors import BadAperture, UnsupportedInclination, WrongPlane
from .polytope import (
    convex_hull_2d,
    plane_section_z,
    points_in_convex_polygon,
    polygon_area,
)
from .scene import CameraModel

PLANE_TOL = 1e-9
DEFAULT_ARC_TOL = 1e-3  # meters, polygonization sagitta


@dataclass(frozen=True)
class ChordParams:
    """Inscribed-angle circle parameters for a chord of length l."""

    l: float
    r: float
    d: float
    aperture: float


def chord_params(l: float, aperture: float) -> ChordParams:
    """r = l / (2 sin aperture), d = l / (2 tan aperture)."""
    if not (l > 0.0):
        raise BadAperture(f"chord length must be positive, got {l!r}")
    if not (0.0 < aperture < math.pi):
        raise BadAperture(f"aperture must be in (0, pi), got {aperture!r}")
    r = l / (2.0 * math.sin(aperture))
    d = l / (2.0 * math.tan(aperture))
    return ChordParams(l=l, r=r, d=d, aperture=aperture)


def inclination(box: RectBox) -> float:
    """Inclination of the box plane relative to horizontal, in (0, pi/2]."""
    e0 = box.frame[0]
    return math.acos(min(1.0, abs(float(e0[2]))))


@dataclass(frozen=True, eq=False)
class PlaneFrame:
    """2D frame on Plane H: origin on the box-plane trace line, u lateral
    (horizontal, along the box), t forward (horizontal, toward the camera)."""

    origin: np.ndarray
    u: np.ndarray
    t: np.ndarray
    h_c: float

    def to2d(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        rel = pts - self.origin
        return np.stack([rel @ self.u, rel @ self.t], axis=-1)

    def to3d(self, uv: np.ndarray) -> np.ndarray:
        uv = np.atleast_2d(np.asarray(uv, dtype=float))
        return self.origin + uv[:, :1] * self.u + uv[:, 1:2] * self.t


def _plane_frame_for_box(box: RectBox, h_c: float) -> PlaneFrame:
    """Frame anchored where the box plane meets Plane H, below/above corner A."""
    e0, e1, e2 = box.frame
    if float(e0[2]) > 1e-9:
        raise UnsupportedInclination(
            "marker plane overhangs the camera (average normal points upward); "
            "only vertical and downward-facing markers are supported")
    horiz = np.array([e0[0], e0[1], 0.0])
    t = horiz / np.linalg.norm(horiz)
    # walk along the in-plane steep direction from corner A down to z = h_c
    a = box.a
    s = float(e2[2])
    origin = a + ((h_c - a[2]) / s) * e2
    return PlaneFrame(origin=origin, u=e1, t=t, h_c=h_c)


def _line_z_intersection(p: np.ndarray, q: np.ndarray, h: float) -> np.ndarray:
    """Point at height h on the (extended) line through p and q."""
    dz = q[2] - p[2]
    t = (h - p[2]) / dz
    return p + t * (q - p)


@dataclass(frozen=True, eq=False)
class RnhRegion:
    """Horizontal no-view region: rectangle H1-H2-H3-H4 plus the half
    ellipse attached on the camera side of edge H3-H4."""

    h1: np.ndarray
    h2: np.ndarray
    h3: np.ndarray
    h4: np.ndarray
    t1: np.ndarray
    a: float
    b: float
    c: float
    alpha: float
    chord: ChordParams
    frame: PlaneFrame
    h_c: float

    def _sigma_eta(self, pts) -> np.ndarray:
        mid = 0.5 * (self.h1 + self.h2)
        rel = np.atleast_2d(np.asarray(pts, dtype=float)) - mid
        return np.stack([rel @ self.frame.u, rel @ self.frame.t], axis=-1)

    def contains_many(self, pts: np.ndarray, tol: float = PLANE_TOL) -> np.ndarray:
        se = self._sigma_eta(pts)
        sigma, eta = se[:, 0], se[:, 1]
        hw = 0.5 * float(np.linalg.norm(self.h2 - self.h1))
        in_rect = (np.abs(sigma) <= hw + tol) & (eta >= -tol) & (eta <= self.c + tol)
        quad = (sigma / self.b) ** 2 + ((eta - self.c) / self.a) ** 2
        slack = 2.0 * tol / min(self.a, self.b)
        in_ell = (eta >= self.c - tol) & (quad <= 1.0 + slack)
        return in_rect | in_ell

    def contains(self, p, tol: float = PLANE_TOL) -> bool:
        return bool(self.contains_many(np.asarray(p, dtype=float)[None, :], tol)[0])

    def boundary_2d(self, arc_tol: float = DEFAULT_ARC_TOL) -> np.ndarray:
        """Closed boundary polyline in plane-H world x-y coordinates."""
        mid = 0.5 * (self.h1 + self.h2)
        u, t = self.frame.u, self.frame.t
        n = _arc_point_count(max(self.a, self.b), arc_tol)
        ang = np.linspace(0.0, math.pi, n)
        arc = [mid + self.b * math.cos(g) * u + (self.c + self.a * math.sin(g)) * t
               for g in ang]
        # back edge H1->H2, then the arc from the H3 side over the apex to H4
        ring = [self.h1, self.h2] + arc
        return np.array([[p[0], p[1]] for p in ring])


def _arc_point_count(radius: float, arc_tol: float) -> int:
    if radius <= 0:
        return 8
    step = math.sqrt(8.0 * arc_tol / radius)
    return max(8, int(math.ceil(math.pi / step)) + 1)


def rnh_section(bh: RectBox, cam: CameraModel) -> RnhRegion:
    """RNH on Plane H from the horizontal-constraint box.

    P and Q are where Plane H meets the two non-horizontal sides of BH;
    the chord is |PQ| (= the box width) with the horizontal aperture.
    """
    h_c = cam.h_c
    frame = _plane_frame_for_box(bh, h_c)
    p = _line_z_intersection(bh.a, bh.d, h_c)
    q = _line_z_intersection(bh.b, bh.c, h_c)
    l = float(np.linalg.norm(q - p))
    cp = chord_params(l, cam.theta)
    alpha = inclination(bh)
    sin_alpha = math.sqrt(max(0.0, 1.0 - float(bh.frame[0][2]) ** 2))
    a = cp.r / sin_alpha
    b = cp.r
    c = cp.d / sin_alpha
    ab_dir = frame.u
    ext = (2.0 * cp.r - l) / 2.0
    h1 = p - ext * ab_dir
    h2 = q + ext * ab_dir
    h3 = h2 + c * frame.t
    h4 = h1 + c * frame.t
    return RnhRegion(h1=h1, h2=h2, h3=h3, h4=h4, t1=frame.t, a=a, b=b, c=c,
                     alpha=alpha, chord=cp, frame=frame, h_c=h_c)


@dataclass(frozen=True, eq=False)
class HexPrism:
    """The extended vertical-constraint solid: the enlarged box rectangle
    J-K-M-N in the marker plane, extruded by d toward the camera."""

    vertices: np.ndarray  # (8, 3): J, K, M, N, J', K', M', N'
    box: RectBox
    chord: ChordParams


def rnv_prism(bv: RectBox, cam: CameraModel) -> HexPrism:
    """Prism vertices from the vertical-constraint box (aperture = phi)."""
    e0 = bv.frame[0]
    l = bv.height  # |AD|, the vertical chord length
    cp = chord_params(l, cam.phi)
    ab = (bv.b - bv.a) / np.linalg.norm(bv.b - bv.a)
    ad = (bv.d - bv.a) / np.linalg.norm(bv.d - bv.a)
    lat = (cp.d + cp.r) * ab
    vert = ((2.0 * cp.r - l) / 2.0) * ad
    j = bv.a - lat - vert
    k = bv.b + lat - vert
    m = bv.c + lat + vert
    n = bv.d - lat + vert
    shift = cp.d * e0  # toward the camera, perpendicular to the marker plane
    verts = np.array([j, k, m, n, j + shift, k + shift, m + shift, n + shift])
    return HexPrism(vertices=verts, box=bv, chord=cp)


@dataclass(frozen=True, eq=False)
class CapEllipse:
    """Half-ellipse cap attached at a lateral end of RNV.

    The swept circles put every covered point at radial distance at most
    d + w from the end chord, so the cap is that circle stretched by
    1/sin(alpha) in the forward direction, truncated at the band depth.
    """

    center: np.ndarray       # 3D, on Plane H
    semi_lateral: float
    semi_forward: float
    eta_cut: float           # forward truncation (band depth)
    frame: PlaneFrame

    def contains_many(self, pts: np.ndarray, tol: float = PLANE_TOL) -> np.ndarray:
        se = self.frame.to2d(pts) - self.frame.to2d(self.center)[0]
        slack = 2.0 * tol / min(self.semi_lateral, self.semi_forward)
        quad = (se[:, 0] / self.semi_lateral) ** 2 + (se[:, 1] / self.semi_forward) ** 2
        return ((se[:, 1] >= -tol) & (se[:, 1] <= self.eta_cut + tol)
                & (quad <= 1.0 + slack))


@dataclass(frozen=True, eq=False)
class RnvRegion:
    """Vertical no-view region: convex section polygon plus end caps."""

    vertices: np.ndarray          # clip of the prism by Plane H (may be empty)
    case_id: int
    cap_ellipses: tuple
    exists: bool
    polygon: np.ndarray = field(default=None)  # final convex polygon, 2D world xy
    frame: PlaneFrame = field(default=None)
    h_c: float = field(default=None)
    band: tuple = field(default=None)          # (sigma_left, sigma_right, eta_max)

    def contains_many(self, pts: np.ndarray, tol: float = PLANE_TOL) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros(len(pts), dtype=bool)
        if not self.exists:
            return out
        if self.polygon is not None and len(self.polygon) >= 2:
            out |= points_in_convex_polygon(pts[:, :2], self.polygon, tol)
        for cap in self.cap_ellipses:
            out |= cap.contains_many(pts, tol)
        return out

    def contains(self, p, tol: float = PLANE_TOL) -> bool:
        return bool(self.contains_many(np.asarray(p, dtype=float)[None, :], tol)[0])

    def boundary_2d(self, arc_tol: float = DEFAULT_ARC_TOL):
        """List of boundary rings (here: one), world x-y, or [] if empty."""
        if not self.exists:
            return []
        pts = []
        if self.polygon is not None and len(self.polygon) >= 3:
            pts.append(self.polygon)
        for cap in self.cap_ellipses:
            n = _arc_point_count(max(cap.semi_lateral, cap.semi_forward), arc_tol)
            ang = np.linspace(0.0, math.pi, n)
            cw = np.asarray(cap.center[:2])
            u2 = cap.frame.u[:2] / np.linalg.norm(cap.frame.u[:2])
            t2 = cap.frame.t[:2] / np.linalg.norm(cap.frame.t[:2])
            # flat-topped arc: the ellipse is truncated at the band depth
            arc = [cw + cap.semi_lateral * math.cos(g) * u2
                   + min(cap.semi_forward * math.sin(g), cap.eta_cut) * t2
                   for g in ang]
            pts.append(np.array(arc))
        merged = np.vstack(pts)
        return [convex_hull_2d(merged)]


def _ensure_ccw(polygon: np.ndarray) -> np.ndarray:
    if len(polygon) < 3:
        return polygon
    x, y = polygon[:, 0], polygon[:, 1]
    signed = float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    return polygon if signed >= 0 else polygon[::-1]


def _case_id(prism: HexPrism, h_c: float) -> int:
    jz = prism.vertices[0][2]
    jpz = prism.vertices[4][2]
    nz = prism.vertices[3][2]
    npz = prism.vertices[7][2]
    if h_c >= jz:
        return 4
    if h_c >= jpz:
        return 1
    if h_c >= nz:
        return 2
    if h_c >= npz:
        return 3
    return 5


def rnv_section(prism: HexPrism, h_c: float) -> RnvRegion:
    """Cross-section of the extended vertical solid with Plane H.

    One generic convex plane-polytope clip realizes all the case shapes;
    the swept-circle bulges are covered by a band rectangle spanning the
    chord stations plus two half-ellipse end caps whose size follows the
    chord circle at the section height.
    """
    box = prism.box
    cp = prism.chord
    e0, e1, e2 = box.frame
    clip = plane_section_z(prism.vertices, h_c)
    case = _case_id(prism, h_c)
    frame = _plane_frame_for_box(box, h_c)

    sin_a = math.sqrt(max(0.0, 1.0 - float(e0[2]) ** 2))
    cos_a = -float(e0[2])  # >= 0 once overhang is rejected

    z_mid = 0.5 * (box.a[2] + box.d[2])
    zeta0 = (h_c - z_mid) / float(e2[2])
    d, r = cp.d, cp.r
    big_d = d * sin_a - zeta0 * cos_a
    disc = big_d * big_d + r * r - d * d - zeta0 * zeta0

    caps = ()
    band = None
    pieces = []
    if len(clip) >= 3:
        pieces.append(frame.to2d(clip))
    if disc >= 0.0:
        eta_max = big_d + math.sqrt(disc)
        if eta_max > PLANE_TOL:
            mid_left = 0.5 * (box.a + box.d)
            mid_right = 0.5 * (box.b + box.c)
            c_left = mid_left + zeta0 * e2
            c_right = mid_right + zeta0 * e2
            sl = float(frame.to2d(c_left)[0, 0])
            sr = float(frame.to2d(c_right)[0, 0])
            sl, sr = min(sl, sr), max(sl, sr)
            zeta1 = zeta0 + eta_max * cos_a
            zeta_star = min(max(0.0, min(zeta0, zeta1)), max(zeta0, zeta1))
            w_star = math.sqrt(max(0.0, r * r - zeta_star * zeta_star))
            xi = d + w_star
            band = (sl, sr, eta_max)
            pieces.append(np.array([[sl, 0.0], [sr, 0.0],
                                    [sr, eta_max], [sl, eta_max]]))
            caps = (
                CapEllipse(center=frame.to3d([[sl, 0.0]])[0], semi_lateral=xi,
                           semi_forward=xi / sin_a, eta_cut=eta_max, frame=frame),
                CapEllipse(center=frame.to3d([[sr, 0.0]])[0], semi_lateral=xi,
                           semi_forward=xi / sin_a, eta_cut=eta_max, frame=frame),
            )
    if pieces:
        hull2d_local = convex_hull_2d(np.vstack(pieces))
        if len(hull2d_local):
            polygon = np.asarray(frame.to3d(hull2d_local))[:, :2]
            polygon = _ensure_ccw(polygon)
        else:
            polygon = None
    else:
        polygon = None
    exists = bool((polygon is not None and polygon_area(polygon) > 1e-12) or caps)
    return RnvRegion(vertices=clip, case_id=case, cap_ellipses=caps, exists=exists,
                     polygon=polygon, frame=frame, h_c=h_c, band=band)


@dataclass(frozen=True, eq=False)
class RnaRegion:
    """Union of RNH and RNV; membership is the logical OR."""

    rnh: RnhRegion
    rnv: RnvRegion
    h_c: float

    def contains_many(self, pts: np.ndarray, tol: float = PLANE_TOL) -> np.ndarray:
        out = self.rnh.contains_many(pts, tol)
        if self.rnv is not None and self.rnv.exists:
            out = out | self.rnv.contains_many(pts, tol)
        return out

    def contains(self, p, tol: float = PLANE_TOL) -> bool:
        return bool(self.contains_many(np.asarray(p, dtype=float)[None, :], tol)[0])

    def shapely_polygon(self, arc_tol: float = DEFAULT_ARC_TOL):
        """Union boundary as a shapely (Multi)Polygon in plane-H x-y."""
        from shapely.geometry import Polygon
        from shapely.ops import unary_union

        polys = [Polygon(self.rnh.boundary_2d(arc_tol))]
        if self.rnv is not None and self.rnv.exists:
            for ring in self.rnv.boundary_2d(arc_tol):
                if len(ring) >= 3:
                    polys.append(Polygon(ring))
        return unary_union([p.buffer(0) for p in polys])

    def boundary_rings(self, arc_tol: float = DEFAULT_ARC_TOL):
        """Exterior ring(s) of the union as arrays of [x, y] rows."""
        geom = self.shapely_polygon(arc_tol)
        if geom.is_empty:
            return []
        if geom.geom_type == "Polygon":
            geoms = [geom]
        else:
            geoms = sorted(geom.geoms, key=lambda g: g.area, reverse=True)
        return [np.asarray(g.exterior.coords) for g in geoms]


def rna_union(rnh: RnhRegion, rnv: RnvRegion) -> RnaRegion:
    if rnv is not None and rnv.h_c is not None and abs(rnv.h_c - rnh.h_c) > PLANE_TOL:
        raise WrongPlane("RNH and RNV live on different Plane H heights")
    return RnaRegion(rnh=rnh, rnv=rnv, h_c=rnh.h_c)


def contains(region, p, tol: float = PLANE_TOL) -> bool:
    """Membership with the Plane-H precondition: p.z must equal h_c."""
    p = np.asarray(p, dtype=float)
    h_c = region.h_c
    if abs(p[2] - h_c) > tol:
        raise WrongPlane(f"point z={p[2]!r} is not on Plane H (h_c={h_c!r})")
    return region.contains(p, tol)


def regions_for_scene(scene):
    """Full pipeline: scene -> (bh, bv, rnh, rnv, rna)."""
    from .boxes import build_bh, build_bv
    from .scene import compute_extrema

    ext = compute_extrema(scene)
    bh = build_bh(scene, ext)
    bv = build_bv(scene, ext)
    rnh = rnh_section(bh, scene.camera)
    prism = rnv_prism(bv, scene.camera)
    rnv = rnv_section(prism, scene.camera.h_c)
    rna = rna_union(rnh, rnv)
    return bh, bv, rnh, rnv, rna
