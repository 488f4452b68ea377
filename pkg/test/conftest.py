import numpy as np
import pytest

from c2fgrasp.data import PointCloud
from c2fgrasp.geometry import GripperGeometry

from helpers import box_surface


@pytest.fixture
def gripper() -> GripperGeometry:
    return GripperGeometry()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture(scope='session')
def box_cloud() -> PointCloud:
    return PointCloud(box_surface(10000))
