"""Pinhole pan-tilt camera and the brute-force visibility oracle.

The oracle answers, for a camera position on Plane H: over all pan/tilt
orientations, what is the largest achievable minimum pixel margin of the
feature points to the image edges? A position is visible when that value
is positive. The search is a coarse pan/tilt grid followed by a joint
pattern-search refinement, vectorized over many positions at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BehindCamera
from .scene import CameraModel, Scene

DEPTH_EPS = 1e-9
PENALTY = -1e9         # sentinel margin when a point is unprojectable
TILT_EPS = 0.01        # keep the tilt grid away from the poles
TIE_WEIGHT = 1e-6      # lexicographic tie-break toward balanced margins


@dataclass(frozen=True)
class PanTiltPose:
    """Camera orientation: pan about z (from +x), then tilt (elevation,
    positive up) about the panned horizontal axis."""

    position: np.ndarray
    pan: float
    tilt: float

    def __post_init__(self):
        if not abs(self.tilt) < math.pi / 2:
            raise ValueError(f"tilt must satisfy |tilt| < pi/2, got {self.tilt!r}")


@dataclass(frozen=True)
class ImagePoint:
    u: float
    v: float


@dataclass(frozen=True)
class PixelMargins:
    """Signed pixel distances of the extremal projections to the image
    edges; all four positive means every point is in view."""

    left: float
    right: float
    top: float
    bottom: float

    @property
    def min(self) -> float:
        return min(self.left, self.right, self.top, self.bottom)

    @property
    def visible(self) -> bool:
        return self.min > 0.0

    def as_tuple(self):
        return (self.left, self.right, self.top, self.bottom)


def focal_lengths(cam: CameraModel):
    f_u = (cam.width / 2.0) / math.tan(cam.theta / 2.0)
    f_v = (cam.height / 2.0) / math.tan(cam.phi / 2.0)
    return f_u, f_v


def _camera_axes(pan: float, tilt: float):
    cp, sp = math.cos(pan), math.sin(pan)
    ct, st = math.cos(tilt), math.sin(tilt)
    forward = np.array([ct * cp, ct * sp, st])
    right = np.array([sp, -cp, 0.0])
    down = np.array([st * cp, st * sp, -ct])
    return forward, right, down


def project(point, pose: PanTiltPose, cam: CameraModel) -> ImagePoint:
    """Pinhole projection of a 3D point for the given pan-tilt pose."""
    forward, right, down = _camera_axes(pose.pan, pose.tilt)
    rel = np.asarray(point, dtype=float) - np.asarray(pose.position, dtype=float)
    z_c = float(rel @ forward)
    if z_c <= DEPTH_EPS:
        raise BehindCamera(f"point depth {z_c:.3e} is not in front of the camera")
    f_u, f_v = focal_lengths(cam)
    u = cam.width / 2.0 + f_u * float(rel @ right) / z_c
    v = cam.height / 2.0 + f_v * float(rel @ down) / z_c
    return ImagePoint(u=u, v=v)


def margins_at_pose(points, pose: PanTiltPose, cam: CameraModel) -> PixelMargins:
    """Pixel margins of a point set at one pose (PENALTY if any point is
    behind the camera)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    forward, right, down = _camera_axes(pose.pan, pose.tilt)
    rel = pts - np.asarray(pose.position, dtype=float)
    z = rel @ forward
    if np.any(z <= DEPTH_EPS):
        return PixelMargins(PENALTY, PENALTY, PENALTY, PENALTY)
    f_u, f_v = focal_lengths(cam)
    u = cam.width / 2.0 + f_u * (rel @ right) / z
    v = cam.height / 2.0 + f_v * (rel @ down) / z
    return PixelMargins(left=float(np.min(u)), right=float(cam.width - np.max(u)),
                        top=float(np.min(v)), bottom=float(cam.height - np.max(v)))


def _pan_candidates(az: np.ndarray, grid: int, theta: float) -> np.ndarray:
    """Pan samples covering the azimuth hull of all points (of every
    position in the chunk), widened by the horizontal aperture.

    The max-min-margin pan always aims at the point cluster: a pan whose
    optical axis lies further than theta outside the azimuth hull leaves
    some point behind the camera or strictly worsens the binding side.
    Falls back to the full circle when the hull is too wide.
    """
    step = 2.0 * np.pi / grid
    full = -np.pi + step * (np.arange(grid) + 1)                     # (-pi, pi]
    flat = np.sort(az.ravel())
    gaps = np.diff(np.concatenate([flat, [flat[0] + 2.0 * np.pi]]))
    k = int(np.argmax(gaps))
    span = 2.0 * np.pi - gaps[k]
    if span + 2.0 * theta >= 2.0 * np.pi - step:
        return full
    start = flat[(k + 1) % len(flat)] - theta
    count = int(np.ceil((span + 2.0 * theta) / step)) + 1
    pans = start + step * np.arange(count)
    return np.arctan2(np.sin(pans), np.cos(pans))


def _margins_grid(positions, points, cam: CameraModel, grid: int):
    """Coarse pan/tilt grid search, vectorized over positions.

    Returns best (score, pan, tilt, margins[B,4]) per position.
    """
    B = len(positions)
    pts = np.asarray(points, dtype=float)
    rel0 = pts[None, :, :] - positions[:, None, :]      # (B, N, 3)
    rho = np.hypot(rel0[:, :, 0], rel0[:, :, 1])
    az = np.arctan2(rel0[:, :, 1], rel0[:, :, 0])
    dz = rel0[:, :, 2]

    pans = _pan_candidates(az, grid, cam.theta)
    tilts = np.linspace(-np.pi / 2 + TILT_EPS, np.pi / 2 - TILT_EPS, grid)
    ct, st = np.cos(tilts), np.sin(tilts)                            # (T,)
    f_u, f_v = focal_lengths(cam)
    W, H = float(cam.width), float(cam.height)

    best_score = np.full(B, -np.inf)
    best_pan = np.zeros(B)
    best_tilt = np.zeros(B)
    best_margins = np.full((B, 4), PENALTY)

    for pan in pans:
        delta = az - pan                                             # (B, N)
        rc = rho * np.cos(delta)
        x_c = -(rho * np.sin(delta))
        # (B, N, T)
        z_c = rc[:, :, None] * ct + dz[:, :, None] * st
        y_c = rc[:, :, None] * st - dz[:, :, None] * ct
        valid = z_c > DEPTH_EPS
        zsafe = np.where(valid, z_c, 1.0)
        u = W / 2.0 + f_u * x_c[:, :, None] / zsafe
        v = H / 2.0 + f_v * y_c / zsafe
        u_lo = np.min(np.where(valid, u, np.inf), axis=1)            # (B, T)
        u_hi = np.max(np.where(valid, u, -np.inf), axis=1)
        v_lo = np.min(np.where(valid, v, np.inf), axis=1)
        v_hi = np.max(np.where(valid, v, -np.inf), axis=1)
        all_valid = np.all(valid, axis=1)
        left = np.where(all_valid, u_lo, PENALTY)
        right = np.where(all_valid, W - u_hi, PENALTY)
        top = np.where(all_valid, v_lo, PENALTY)
        bottom = np.where(all_valid, H - v_hi, PENALTY)
        hmin = np.minimum(left, right)
        vmin = np.minimum(top, bottom)
        score = np.minimum(hmin, vmin) + TIE_WEIGHT * (hmin + vmin)
        t_idx = np.argmax(score, axis=1)                             # (B,)
        s = score[np.arange(B), t_idx]
        better = s > best_score
        if np.any(better):
            bi = np.where(better)[0]
            best_score[bi] = s[bi]
            best_pan[bi] = pan
            best_tilt[bi] = tilts[t_idx[bi]]
            best_margins[bi, 0] = left[bi, t_idx[bi]]
            best_margins[bi, 1] = right[bi, t_idx[bi]]
            best_margins[bi, 2] = top[bi, t_idx[bi]]
            best_margins[bi, 3] = bottom[bi, t_idx[bi]]
    return best_score, best_pan, best_tilt, best_margins


def _margins_at(positions, points, cam: CameraModel, pan, tilt):
    """Margins for per-position poses; pan/tilt are arrays of shape (B,)."""
    pts = np.asarray(points, dtype=float)
    rel = pts[None, :, :] - positions[:, None, :]
    cp, sp = np.cos(pan)[:, None], np.sin(pan)[:, None]
    ct, st = np.cos(tilt)[:, None], np.sin(tilt)[:, None]
    xh = rel[:, :, 0] * cp + rel[:, :, 1] * sp       # horizontal along pan
    x_c = rel[:, :, 0] * sp - rel[:, :, 1] * cp
    z_c = xh * ct + rel[:, :, 2] * st
    y_c = xh * st - rel[:, :, 2] * ct
    valid = z_c > DEPTH_EPS
    zsafe = np.where(valid, z_c, 1.0)
    f_u, f_v = focal_lengths(cam)
    W, H = float(cam.width), float(cam.height)
    u = W / 2.0 + f_u * x_c / zsafe
    v = H / 2.0 + f_v * y_c / zsafe
    u_lo = np.min(np.where(valid, u, np.inf), axis=1)
    u_hi = np.max(np.where(valid, u, -np.inf), axis=1)
    v_lo = np.min(np.where(valid, v, np.inf), axis=1)
    v_hi = np.max(np.where(valid, v, -np.inf), axis=1)
    all_valid = np.all(valid, axis=1)
    left = np.where(all_valid, u_lo, PENALTY)
    right = np.where(all_valid, W - u_hi, PENALTY)
    top = np.where(all_valid, v_lo, PENALTY)
    bottom = np.where(all_valid, H - v_hi, PENALTY)
    return np.stack([left, right, top, bottom], axis=1)


def _score_of(margins: np.ndarray) -> np.ndarray:
    hmin = np.minimum(margins[:, 0], margins[:, 1])
    vmin = np.minimum(margins[:, 2], margins[:, 3])
    return np.minimum(hmin, vmin) + TIE_WEIGHT * (hmin + vmin)


_PATTERN_DIRS = np.array(
    [[math.cos(k * math.pi / 4.0), math.sin(k * math.pi / 4.0)] for k in range(8)])


def _refine(positions, points, cam, pan, tilt, step_pan, step_tilt,
            tol: float = 1e-4, max_iter: int = 80):
    """Joint pan/tilt pattern search from the grid optimum, vectorized.

    The max-min margin surface has ridges where the binding margin
    switches; probing the four diagonals as well keeps the search from
    stalling on them (plain coordinate descent does).
    """
    pan = pan.copy()
    tilt = tilt.copy()
    step = np.full(len(pan), max(step_pan, step_tilt), dtype=float)
    score = _score_of(_margins_at(positions, points, cam, pan, tilt))
    lo_t, hi_t = -np.pi / 2 + TILT_EPS, np.pi / 2 - TILT_EPS
    for _ in range(max_iter):
        if np.all(step <= tol):
            break
        best_gain = np.full(len(pan), -np.inf)
        best_pan = pan
        best_tilt = tilt
        for dx, dy in _PATTERN_DIRS:
            cp = pan + step * dx
            ct = np.clip(tilt + step * dy, lo_t, hi_t)
            s = _score_of(_margins_at(positions, points, cam, cp, ct))
            gain = s - score
            better = gain > best_gain
            best_gain = np.where(better, gain, best_gain)
            best_pan = np.where(better, cp, best_pan)
            best_tilt = np.where(better, ct, best_tilt)
        improved = best_gain > 0.0
        pan = np.where(improved, best_pan, pan)
        tilt = np.where(improved, best_tilt, tilt)
        score = np.where(improved, score + best_gain, score)
        step = np.where(improved, step, step * 0.5)
    return pan, tilt


def _centered_poses(positions, points):
    """Cluster-aimed pose per position plus the enclosing-cone half angle.

    When the cone of directions to all points (around the mean direction)
    has half-angle gamma, pointing the optical axis along the cone axis
    keeps every point within gamma of the axis; gamma below half the
    smaller aperture therefore proves visibility.
    """
    pts = np.asarray(points, dtype=float)
    rel = pts[None, :, :] - positions[:, None, :]
    dirs = rel / np.linalg.norm(rel, axis=2, keepdims=True)
    axis = dirs.sum(axis=1)
    axis /= np.maximum(np.linalg.norm(axis, axis=1, keepdims=True), 1e-300)
    cosg = np.einsum("bnk,bk->bn", dirs, axis)
    gamma = np.arccos(np.clip(np.min(cosg, axis=1), -1.0, 1.0))
    pan = np.arctan2(axis[:, 1], axis[:, 0])
    tilt = np.arctan2(axis[:, 2], np.hypot(axis[:, 0], axis[:, 1]))
    tilt = np.clip(tilt, -np.pi / 2 + TILT_EPS, np.pi / 2 - TILT_EPS)
    return pan, tilt, gamma


def best_margins_batch(positions, points, cam: CameraModel, grid: int = 64,
                       refine: bool = True, refine_below: float = np.inf,
                       chunk: int = 256):
    """Best achievable margins for many camera positions.

    Returns (pans, tilts, margins) with margins of shape (B, 4). The
    pan/tilt grid is only swept where the enclosing-cone test cannot
    already prove visibility; pattern-search refinement then polishes
    every pose whose score does not exceed ``refine_below`` (margins
    above it are already positive lower bounds).
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    pts = np.asarray(points, dtype=float)
    B = len(positions)
    pans = np.zeros(B)
    tilts = np.zeros(B)
    margins = np.zeros((B, 4))
    step_pan = 2.0 * np.pi / grid
    step_tilt = (np.pi - 2 * TILT_EPS) / max(grid - 1, 1)

    cpan, ctilt, gamma = _centered_poses(positions, points)
    easy = gamma <= 0.475 * min(cam.theta, cam.phi)
    if np.any(easy):
        pans[easy] = cpan[easy]
        tilts[easy] = ctilt[easy]
        margins[easy] = _margins_at(positions[easy], pts, cam,
                                    cpan[easy], ctilt[easy])

    hard_idx = np.where(~easy)[0]
    for i0 in range(0, len(hard_idx), chunk):
        idx = hard_idx[i0:i0 + chunk]
        score, pan, tilt, marg = _margins_grid(positions[idx], points, cam, grid)
        pans[idx] = pan
        tilts[idx] = tilt
        margins[idx] = marg

    if refine:
        todo = np.where(_score_of(margins) <= refine_below)[0]
        for i0 in range(0, len(todo), 4 * chunk):
            idx = todo[i0:i0 + 4 * chunk]
            rp, rt = _refine(positions[idx], pts, cam, pans[idx].copy(),
                             tilts[idx].copy(), step_pan, step_tilt)
            new_m = _margins_at(positions[idx], points, cam, rp, rt)
            improved = _score_of(new_m) >= _score_of(margins[idx])
            upd = idx[improved]
            pans[upd] = rp[improved]
            tilts[upd] = rt[improved]
            margins[upd] = new_m[improved]
    return pans, tilts, margins


def best_pose_margins(position, scene: Scene, grid: int = 64):
    """Pose maximizing the minimum pixel margin at one position."""
    points = scene.all_points()
    pans, tilts, margins = best_margins_batch(
        np.asarray(position, dtype=float)[None, :], points, scene.camera, grid=grid)
    pose = PanTiltPose(position=np.asarray(position, dtype=float),
                       pan=float(pans[0]), tilt=float(tilts[0]))
    m = PixelMargins(left=float(margins[0, 0]), right=float(margins[0, 1]),
                     top=float(margins[0, 2]), bottom=float(margins[0, 3]))
    return pose, m


def horizontal_span(position, points) -> float:
    """Width of the minimal azimuth interval covering all points.

    Points horizontally coincident with the camera have no bearing and are
    skipped. Note this is a plane-geometry diagnostic: at steep viewing
    elevations the image compresses azimuth differences, so a span larger
    than the horizontal aperture does not by itself prove invisibility.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rel = pts - np.asarray(position, dtype=float)
    rho = np.hypot(rel[:, 0], rel[:, 1])
    ok = rho > 1e-12
    if np.sum(ok) < 2:
        return 0.0
    az = np.sort(np.arctan2(rel[ok, 1], rel[ok, 0]))
    gaps = np.diff(np.concatenate([az, [az[0] + 2.0 * np.pi]]))
    return float(2.0 * np.pi - np.max(gaps))


def vertical_span_at_best_pan(position, points) -> float:
    """Elevation span of the points (the vertical analog of the azimuth
    span; elevation does not depend on the pan choice)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rel = pts - np.asarray(position, dtype=float)
    rho = np.hypot(rel[:, 0], rel[:, 1])
    el = np.arctan2(rel[:, 2], rho)
    return float(np.max(el) - np.min(el))


def oracle_compare(scene: Scene, rna, window, n: int = 200, grid: int = 64,
                   refine_band: float = 50.0):
    """Grid comparison of analytic RNA membership against the oracle.

    window = (x0, x1, y0, y1) on Plane H; n x n positions. Only positions
    whose coarse-grid margin is at most ``refine_band`` px are refined;
    larger grid margins already prove visibility.

    Returns (records, summary): records is a dict of per-position arrays
    (x, y, analytic_in_rna, oracle_visible, min_margin_px).
    """
    x0, x1, y0, y1 = window
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    positions = np.column_stack([gx.ravel(), gy.ravel(),
                                 np.full(gx.size, scene.camera.h_c)])
    points = scene.all_points()
    _, _, margins = best_margins_batch(positions, points, scene.camera,
                                       grid=grid, refine_below=refine_band)
    min_margin = np.min(margins, axis=1)
    visible = min_margin > 0.0
    in_rna = rna.contains_many(positions)

    agree = (in_rna == ~visible)
    agreement = float(np.mean(agree))
    # conservativeness violations: oracle says infeasible, analytic says go
    viol = (~in_rna) & (~visible)
    viol_idx = np.where(viol)[0]
    cell = max((x1 - x0), (y1 - y0)) / (n - 1)
    band_width = 0.0
    if len(viol_idx):
        geom = rna.shapely_polygon()
        from shapely.geometry import Point
        dists = np.array([geom.distance(Point(positions[i, 0], positions[i, 1]))
                          for i in viol_idx])
        band_width = float(np.max(dists))
    summary = {
        "n": int(n),
        "window": [float(x0), float(x1), float(y0), float(y1)],
        "cell_size": float(cell),
        "agreement": agreement,
        "analytic_in_rna": int(np.sum(in_rna)),
        "oracle_infeasible": int(np.sum(~visible)),
        "violations_outside_rna": int(len(viol_idx)),
        "violation_band_width": band_width,
        "violation_band_cells": float(band_width / cell) if cell else 0.0,
    }
    records = {
        "x": positions[:, 0],
        "y": positions[:, 1],
        "analytic_in_rna": in_rna,
        "oracle_visible": visible,
        "min_margin_px": min_margin,
    }
    return records, summary
