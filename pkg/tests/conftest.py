import math
from pathlib import Path

import numpy as np
import pytest

from fovregion import CameraModel, Scene, load_scene, square_marker

SCENES = Path(__file__).resolve().parent.parent / "scenes"


@pytest.fixture(scope="session")
def canonical_scene():
    return load_scene(SCENES / "vertical_square.json")


@pytest.fixture(scope="session")
def billboard_scene():
    return load_scene(SCENES / "billboard.json")


@pytest.fixture(scope="session")
def two_marker_scene():
    return load_scene(SCENES / "two_markers.json")


@pytest.fixture(scope="session")
def two_marker_high_scene():
    return load_scene(SCENES / "two_markers_high.json")


@pytest.fixture(scope="session")
def scenes_dir():
    return SCENES


def tilted_marker_scene(tilt_deg, yaw_deg=0.0, center=(0.0, 2.0, 2.2), side=1.0,
                        theta=1.13, phi=1.0, h_c=1.3):
    """Single square marker facing the origin, tilted down by tilt_deg."""
    b = math.radians(tilt_deg)
    y = math.radians(yaw_deg)
    n = np.array([math.cos(b) * math.sin(y), -math.cos(b) * math.cos(y),
                  -math.sin(b)])
    mk = square_marker("tilted", center=center, normal=n, side=side)
    cam = CameraModel(theta=theta, phi=phi, width=1024, height=1024, h_c=h_c)
    return Scene(markers=(mk,), camera=cam)
