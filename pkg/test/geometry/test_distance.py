import math

import numpy as np

from scipy.spatial.transform import Rotation

from c2fgrasp.geometry import (FLIP_X, rot_x, rot_z, rotation_angle, rotation_distance,
                               rotation_distance_batch, symmetric_rotation_angle,
                               symmetric_rotation_distance)

from helpers import random_rotation


def test_rotation_distance_is_half_angle(rng):
    axes = rng.normal(size=(1000, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    thetas = rng.uniform(0.0, math.pi, size=1000)
    rotations = Rotation.from_rotvec(axes * thetas[:, None]).as_matrix()
    for R, theta in zip(rotations, thetas):
        d = rotation_distance(np.eye(3), R)
        assert abs(d - math.asin(math.sin(theta / 2))) < 1e-9
        assert 0.0 <= d <= math.pi / 2


def test_rotation_distance_examples():
    assert rotation_distance(np.eye(3), np.eye(3)) == 0.0
    assert abs(rotation_distance(np.eye(3), rot_z(math.pi / 2)) - math.pi / 4) < 1e-12
    assert abs(rotation_distance(np.eye(3), rot_z(math.pi)) - math.pi / 2) < 1e-12
    assert abs(rotation_angle(np.eye(3), rot_z(math.radians(7))) - math.radians(7)) < 1e-12


def test_rotation_distance_symmetry_and_invariance(rng):
    for _ in range(50):
        R1, R2, Q = random_rotation(rng), random_rotation(rng), random_rotation(rng)
        d = rotation_distance(R1, R2)
        assert abs(d - rotation_distance(R2, R1)) < 1e-12
        assert abs(d - rotation_distance(Q @ R1, Q @ R2)) < 1e-9


def test_batch_matches_scalar(rng):
    R1 = np.stack([random_rotation(rng) for _ in range(10)])
    R2 = np.stack([random_rotation(rng) for _ in range(10)])
    batch = rotation_distance_batch(R1, R2)
    assert np.allclose(batch, [rotation_distance(a, b) for a, b in zip(R1, R2)], atol=1e-15)


def test_symmetric_distance(rng):
    R = random_rotation(rng)
    assert rotation_distance(R, R @ FLIP_X) > 1.5
    assert symmetric_rotation_distance(R, R @ FLIP_X) < 1e-7
    assert symmetric_rotation_distance(R, R @ rot_x(math.pi)) < 1e-7
    small = R @ rot_z(math.radians(3))
    assert abs(symmetric_rotation_angle(R, small) - math.radians(3)) < 1e-9
