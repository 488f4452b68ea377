import math

import numpy as np
import pytest

from c2fgrasp.geometry import FLIP_X, GraspPose, euler_to_rotmat

from helpers import random_pose, random_rotation


def test_rejects_invalid_inputs():
    with pytest.raises(ValueError):
        GraspPose(np.diag([1.0, 1.0, -1.0]), np.zeros(3))
    with pytest.raises(ValueError):
        GraspPose(2 * np.eye(3), np.zeros(3))
    with pytest.raises(ValueError):
        GraspPose(np.eye(3), [0.0, float('nan'), 0.0])
    with pytest.raises(ValueError):
        GraspPose(np.eye(3), np.zeros(3), confidence=1.5)


def test_from_euler_keeps_angles():
    pose = GraspPose.from_euler((0.1, -0.2, 0.3), [1, 2, 3], 0.5)
    assert tuple(pose.euler[:3]) == (0.1, -0.2, 0.3)
    assert np.allclose(pose.rotation, euler_to_rotmat((0.1, -0.2, 0.3)))
    assert pose.confidence == 0.5


def test_canonical_is_equivalent(rng):
    for _ in range(50):
        pose = random_pose(rng)
        c = pose.canonical()
        assert -math.pi / 2 <= c.euler.r_x < math.pi / 2
        same = np.allclose(c.rotation, pose.rotation, atol=1e-9)
        flipped = np.allclose(c.rotation, pose.rotation @ FLIP_X, atol=1e-9)
        assert same or flipped
        assert np.array_equal(c.translation, pose.translation)
        assert c.canonical() is c


def test_canonical_wraps_out_of_range_angles():
    pose = GraspPose.from_euler((0.2, 0.1, 4.0), np.zeros(3))
    c = pose.canonical()
    assert -math.pi <= c.euler.r_z < math.pi
    assert np.allclose(c.rotation, pose.rotation, atol=1e-9)


def test_local_world_round_trip(rng):
    pose = random_pose(rng)
    points = rng.normal(size=(10, 3))
    assert np.allclose(pose.to_world(pose.to_local(points)), points, atol=1e-12)


def test_transformed(rng):
    pose = random_pose(rng)
    R, t = random_rotation(rng), rng.normal(size=3)
    moved = pose.transformed(R, t)
    point = rng.normal(size=3)
    local = pose.to_local(point)
    assert np.allclose(moved.to_local(R @ point + t), local, atol=1e-12)


def test_matrix_round_trip(rng):
    pose = random_pose(rng)
    again = GraspPose.from_matrix(pose.matrix)
    assert np.allclose(again.rotation, pose.rotation)
    assert np.allclose(again.translation, pose.translation)
