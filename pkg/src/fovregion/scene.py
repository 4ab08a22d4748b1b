"""Scene representation: markers, camera parameters, frames and extremal points.

Coordinate convention: right-handed robot frame, z up, origin at the robot
base, lengths in meters, angles in radians. 3D points are numpy arrays of
shape (3,), float64.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateNormal, SceneFormatError, VerticalNormal

Z_AXIS = np.array([0.0, 0.0, 1.0])

COPLANARITY_TOL = 1e-6   # meters
UNIT_TOL = 1e-9


def _as_point(x, what: str = "point") -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.shape != (3,):
        raise SceneFormatError(f"{what} must have 3 components, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise SceneFormatError(f"{what} has non-finite components: {p}")
    return p


@dataclass(frozen=True, eq=False)
class Marker:
    """A planar marker: >=3 coplanar feature points plus its unit normal."""

    id: str
    points: np.ndarray       # (N, 3)
    unit_normal: np.ndarray  # (3,)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 3:
            raise SceneFormatError(
                f"marker {self.id!r}: need >=3 points of dim 3, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise SceneFormatError(f"marker {self.id!r}: non-finite point coordinates")
        n = _as_point(self.unit_normal, f"marker {self.id!r} normal")
        if abs(np.linalg.norm(n) - 1.0) > UNIT_TOL:
            raise SceneFormatError(
                f"marker {self.id!r}: normal must be unit length, |n|={np.linalg.norm(n)!r}")
        centroid = pts.mean(axis=0)
        off = (pts - centroid) @ n
        worst = float(np.max(np.abs(off)))
        if worst > COPLANARITY_TOL:
            raise SceneFormatError(
                f"marker {self.id!r}: points deviate {worst:.3e} m from the marker plane "
                f"(tolerance {COPLANARITY_TOL:g})")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "unit_normal", n)


@dataclass(frozen=True)
class CameraModel:
    """Pinhole pan-tilt camera: full angular apertures and image size.

    theta/phi are the full horizontal/vertical FOV opening angles; h_c is
    the optical-center height above the ground, which fixes Plane H.
    """

    theta: float
    phi: float
    width: int
    height: int
    h_c: float

    def __post_init__(self):
        if not (0.0 < self.theta < math.pi):
            raise SceneFormatError(f"theta must be in (0, pi), got {self.theta!r}")
        if not (0.0 < self.phi < math.pi):
            raise SceneFormatError(f"phi must be in (0, pi), got {self.phi!r}")
        if self.width < 1 or self.height < 1:
            raise SceneFormatError("image size must be at least 1x1 pixel")
        if not math.isfinite(self.h_c):
            raise SceneFormatError("h_c must be finite")


@dataclass(frozen=True, eq=False)
class Scene:
    markers: tuple
    camera: CameraModel
    reference_center: np.ndarray = field(default=None)  # optical center of the
    # reference observation used to freeze the boxes; defaults to the robot
    # origin lifted to h_c.

    def __post_init__(self):
        if len(self.markers) < 1:
            raise SceneFormatError("scene needs at least one marker")
        total = sum(len(m.points) for m in self.markers)
        if total < 2:
            raise SceneFormatError("scene needs at least two feature points in total")
        if self.reference_center is None:
            ref = np.array([0.0, 0.0, self.camera.h_c])
        else:
            ref = _as_point(self.reference_center, "reference_center")
        object.__setattr__(self, "markers", tuple(self.markers))
        object.__setattr__(self, "reference_center", ref)

    def all_points(self) -> np.ndarray:
        """All feature points stacked in marker order, shape (N, 3)."""
        return np.vstack([m.points for m in self.markers])


@dataclass(frozen=True, eq=False)
class Extrema:
    """Left/right/top/bottom-most feature points, in the marker frame sense."""

    p_l: np.ndarray
    p_r: np.ndarray
    p_t: np.ndarray
    p_b: np.ndarray


def average_unit_normal(markers) -> np.ndarray:
    """Normalized mean of the marker normals, oriented toward the robot origin.

    Raises DegenerateNormal when the normals (nearly) cancel.
    """
    if len(markers) < 1:
        raise DegenerateNormal("no markers")
    mean = np.mean([m.unit_normal for m in markers], axis=0)
    norm = float(np.linalg.norm(mean))
    if norm <= 1e-6:
        raise DegenerateNormal(f"marker normals cancel (|mean|={norm:.3e})")
    n = mean / norm
    centroid = np.vstack([m.points for m in markers]).mean(axis=0)
    # Sign convention: point toward the half-space containing the origin.
    if float(n @ (-centroid)) < 0.0:
        n = -n
    return n


def compute_frame(n: np.ndarray):
    """Orthonormal frame (e0, e1, e2) for a unit normal n.

    e0 = n; e1 is horizontal (zero z-component), e1 = normalize(z x e0);
    e2 = e0 x e1. Right-handed by construction.
    """
    n = np.asarray(n, dtype=float)
    if abs(n[2]) > 1.0 - 1e-9:
        raise VerticalNormal("normal is (anti)parallel to the vertical axis")
    e0 = n
    e1 = np.cross(Z_AXIS, e0)
    e1 = e1 / np.linalg.norm(e1)
    e1[2] = 0.0  # kill rounding residue; exact zero by construction
    e2 = np.cross(e0, e1)
    return e0, e1, e2


def extrema_of_points(points: np.ndarray, e1: np.ndarray, e2: np.ndarray) -> Extrema:
    """Extremal points of a raw point set under the given in-plane axes.

    Ties are broken by the lowest point index (argmin/argmax are stable).
    """
    pts = np.asarray(points, dtype=float)
    u = pts @ e1
    v = pts @ e2
    return Extrema(
        p_l=pts[int(np.argmin(u))],
        p_r=pts[int(np.argmax(u))],
        p_t=pts[int(np.argmax(v))],
        p_b=pts[int(np.argmin(v))],
    )


def compute_extrema(scene: Scene) -> Extrema:
    """Left/right/top/bottom-most feature points of the whole scene.

    The extrema are intrinsic: projections onto the averaged marker frame,
    independent of where the robot currently stands.
    """
    n = average_unit_normal(scene.markers)
    _, e1, e2 = compute_frame(n)
    return extrema_of_points(scene.all_points(), e1, e2)


# --- scene file I/O -------------------------------------------------------

_CAMERA_KEYS = {"theta", "phi", "width", "height", "h_c"}
_MARKER_KEYS = {"id", "points", "normal"}
_SCENE_KEYS = {"camera", "markers", "reference_center"}


def _reject_unknown(d: dict, allowed: set, where: str):
    unknown = set(d) - allowed
    if unknown:
        raise SceneFormatError(f"unknown key(s) {sorted(unknown)} in {where}")


def scene_from_dict(doc: dict) -> Scene:
    if not isinstance(doc, dict):
        raise SceneFormatError("scene document must be a JSON object")
    _reject_unknown(doc, _SCENE_KEYS, "scene")
    try:
        cam_doc = doc["camera"]
        markers_doc = doc["markers"]
    except KeyError as exc:
        raise SceneFormatError(f"scene is missing required key {exc}") from None
    if not isinstance(cam_doc, dict):
        raise SceneFormatError("'camera' must be an object")
    _reject_unknown(cam_doc, _CAMERA_KEYS, "camera")
    missing = _CAMERA_KEYS - set(cam_doc)
    if missing:
        raise SceneFormatError(f"camera is missing key(s) {sorted(missing)}")
    try:
        camera = CameraModel(
            theta=float(cam_doc["theta"]),
            phi=float(cam_doc["phi"]),
            width=int(cam_doc["width"]),
            height=int(cam_doc["height"]),
            h_c=float(cam_doc["h_c"]),
        )
    except (TypeError, ValueError) as exc:
        raise SceneFormatError(f"bad camera parameter: {exc}") from None
    if not isinstance(markers_doc, list) or not markers_doc:
        raise SceneFormatError("'markers' must be a non-empty list")
    markers = []
    for i, m in enumerate(markers_doc):
        if not isinstance(m, dict):
            raise SceneFormatError(f"markers[{i}] must be an object")
        _reject_unknown(m, _MARKER_KEYS, f"markers[{i}]")
        missing = _MARKER_KEYS - set(m)
        if missing:
            raise SceneFormatError(f"markers[{i}] is missing key(s) {sorted(missing)}")
        markers.append(Marker(id=str(m["id"]), points=np.asarray(m["points"], dtype=float),
                              unit_normal=np.asarray(m["normal"], dtype=float)))
    ref = doc.get("reference_center")
    return Scene(markers=tuple(markers), camera=camera,
                 reference_center=None if ref is None else np.asarray(ref, dtype=float))


def load_scene(path) -> Scene:
    """Load and validate a scene JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"invalid JSON in {path}: {exc}") from None
    return scene_from_dict(doc)


def scene_to_dict(scene: Scene) -> dict:
    doc = {
        "camera": {
            "theta": scene.camera.theta,
            "phi": scene.camera.phi,
            "width": scene.camera.width,
            "height": scene.camera.height,
            "h_c": scene.camera.h_c,
        },
        "markers": [
            {"id": m.id, "points": m.points.tolist(), "normal": m.unit_normal.tolist()}
            for m in scene.markers
        ],
        "reference_center": scene.reference_center.tolist(),
    }
    return doc


def square_marker(marker_id: str, center, normal, side: float,
                  with_center_point: bool = True) -> Marker:
    """Convenience constructor: an axis-aligned square in the marker plane.

    Corners at center +/- (side/2) along the marker-frame axes, optionally
    plus the center point itself (five points, like a typical fiducial).
    """
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    _, e1, e2 = compute_frame(n)
    c = np.asarray(center, dtype=float)
    h = side / 2.0
    pts = [c - h * e1 - h * e2, c + h * e1 - h * e2,
           c + h * e1 + h * e2, c - h * e1 + h * e2]
    if with_center_point:
        pts.append(c)
    return Marker(id=marker_id, points=np.array(pts), unit_normal=n)
