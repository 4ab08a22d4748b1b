"""Exception hierarchy for fovregion.

Two families matter for the CLI exit codes: scene/format problems
(exit 2) and geometric degeneracies (exit 3).
"""


class FovRegionError(Exception):
    """Base class for all library errors."""


class SceneFormatError(FovRegionError):
    """Scene file is malformed or violates a declared invariant."""


class GeometryError(FovRegionError):
    """Base class for geometric degeneracies."""


class DegenerateNormal(GeometryError):
    """Marker normals cancel out; no average direction exists."""


class VerticalNormal(GeometryError):
    """Normal is (anti)parallel to the vertical axis; the horizontal
    frame direction is undefined."""


class RayParallelToPlane(GeometryError):
    """Projection ray does not meet the target plane."""


class DegenerateBox(GeometryError):
    """Constructed box has (near-)zero width or height."""


class BadAperture(GeometryError):
    """Angular aperture outside (0, pi)."""


class NoIntersection(GeometryError):
    """Plane H does not meet the construction; region is empty."""


class UnsupportedInclination(GeometryError):
    """Marker plane overhangs the camera (obtuse inclination)."""


class WrongPlane(FovRegionError):
    """Query point does not lie on Plane H."""


class BehindCamera(GeometryError):
    """Point is behind the image plane; projection undefined."""


class Unreachable(FovRegionError):
    """Start or goal lies inside the inflated no-go region."""
