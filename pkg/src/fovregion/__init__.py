"""fovregion: field-of-view constraint regions for a pan-tilt camera.

Given planar markers (feature points + normals) and the camera's angular
apertures, compute the planar regions RNH/RNV/RNA where the camera cannot
keep every feature point in view, verify them against a brute-force
virtual-camera oracle, and simulate or plan robot paths that preserve
full-marker visibility.
"""

from .boxes import RectBox, build_bh, build_bv, project_onto_box_plane
from .camera import (
    ImagePoint,
    PanTiltPose,
    PixelMargins,
    best_margins_batch,
    best_pose_margins,
    horizontal_span,
    margins_at_pose,
    oracle_compare,
    project,
    vertical_span_at_best_pan,
)
from .errors import (
    BadAperture,
    BehindCamera,
    DegenerateBox,
    DegenerateNormal,
    FovRegionError,
    GeometryError,
    NoIntersection,
    RayParallelToPlane,
    SceneFormatError,
    Unreachable,
    UnsupportedInclination,
    VerticalNormal,
    WrongPlane,
)
from .pathsim import (
    TraceRecord,
    Trajectory,
    plan_boundary_path,
    simulate,
    trajectory_from_waypoints,
    write_trace_csv,
)
from .regions import (
    ChordParams,
    RnaRegion,
    RnhRegion,
    RnvRegion,
    chord_params,
    contains,
    inclination,
    regions_for_scene,
    rna_union,
    rnh_section,
    rnv_prism,
    rnv_section,
)
from .scene import (
    CameraModel,
    Extrema,
    Marker,
    Scene,
    average_unit_normal,
    compute_extrema,
    compute_frame,
    extrema_of_points,
    load_scene,
    scene_from_dict,
    scene_to_dict,
    square_marker,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
