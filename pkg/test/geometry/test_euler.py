import math

import numpy as np
import pytest

from hypothesis import given, settings, strategies as st

from c2fgrasp.geometry import (EulerAngles, canonicalize_roll, euler_jacobian_batch, euler_to_rotmat,
                               euler_to_rotmat_batch, rot_x, rotmat_to_euler, wrap_angle, FLIP_X)

roll = st.floats(-math.pi, math.pi, exclude_max=True)
pitch = st.floats(-1.55, 1.55)
yaw = st.floats(-math.pi, math.pi, exclude_max=True)


def test_wrap_angle():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(math.pi) == -math.pi
    assert wrap_angle(-math.pi) == -math.pi
    assert abs(wrap_angle(3 * math.pi / 2) + math.pi / 2) < 1e-12
    assert -math.pi <= wrap_angle(1e3) < math.pi


def test_euler_to_rotmat_convention():
    R = euler_to_rotmat((0.1, 0.2, 0.3))
    expected = np.array([[math.cos(0.3), -math.sin(0.3), 0], [math.sin(0.3), math.cos(0.3), 0], [0, 0, 1]]) \
        @ np.array([[math.cos(0.2), 0, math.sin(0.2)], [0, 1, 0], [-math.sin(0.2), 0, math.cos(0.2)]]) \
        @ rot_x(0.1)
    assert np.allclose(R, expected, atol=1e-15)
    assert np.allclose(R @ R.T, np.eye(3), atol=1e-12)


def test_euler_to_rotmat_rejects_non_finite():
    with pytest.raises(ValueError):
        euler_to_rotmat((float('nan'), 0.0, 0.0))
    with pytest.raises(ValueError):
        euler_to_rotmat((0.0, float('inf'), 0.0))


@settings(max_examples=300, deadline=None)
@given(roll, pitch, yaw)
def test_rotmat_to_euler_round_trip(r_x, r_y, r_z):
    e = rotmat_to_euler(euler_to_rotmat((r_x, r_y, r_z)))
    assert not e.gimbal_locked
    assert abs(e.r_y - r_y) < 1e-9
    assert abs(math.remainder(e.r_x - r_x, 2 * math.pi)) < 1e-9
    assert abs(math.remainder(e.r_z - r_z, 2 * math.pi)) < 1e-9
    assert -math.pi <= e.r_x < math.pi and -math.pi <= e.r_z < math.pi


@pytest.mark.parametrize('r_y', [math.pi / 2, -math.pi / 2])
def test_rotmat_to_euler_gimbal_lock(r_y):
    R = euler_to_rotmat((0.4, r_y, -1.1))
    e = rotmat_to_euler(R)
    assert e.gimbal_locked
    assert e.r_x == 0.0
    assert e.r_y == r_y
    assert np.allclose(euler_to_rotmat(e), R, atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(-20.0, 20.0), pitch, yaw)
def test_canonicalize_roll(r_x, r_y, r_z):
    c = canonicalize_roll(EulerAngles(r_x, r_y, r_z))
    assert -math.pi / 2 <= c.r_x < math.pi / 2
    assert canonicalize_roll(c) == c
    R, R_c = euler_to_rotmat((r_x, r_y, r_z)), euler_to_rotmat(c)
    # same grasp up to the half turn about x
    assert np.allclose(R, R_c, atol=1e-9) or np.allclose(R @ FLIP_X, R_c, atol=1e-9)


def test_canonicalize_roll_boundaries():
    assert canonicalize_roll((math.pi / 2, 0.0, 0.0)).r_x == -math.pi / 2
    assert canonicalize_roll((-math.pi / 2, 0.0, 0.0)).r_x == -math.pi / 2
    assert canonicalize_roll((0.25, 0.0, 0.0)).r_x == 0.25


def test_batch_matches_scalar(rng):
    angles = rng.uniform(-3, 3, size=(50, 3))
    batch = euler_to_rotmat_batch(angles[:, 0], angles[:, 1], angles[:, 2])
    for R, a in zip(batch, angles):
        assert np.allclose(R, euler_to_rotmat(a), atol=1e-15)


def test_jacobian_matches_finite_differences(rng):
    angles = rng.uniform(-3, 3, size=(20, 3))
    analytic = euler_jacobian_batch(angles[:, 0], angles[:, 1], angles[:, 2])
    h = 1e-6
    for axis in range(3):
        plus, minus = angles.copy(), angles.copy()
        plus[:, axis] += h
        minus[:, axis] -= h
        numeric = (euler_to_rotmat_batch(*plus.T) - euler_to_rotmat_batch(*minus.T)) / (2 * h)
        assert np.allclose(analytic[axis], numeric, atol=1e-8)


def test_euler_to_rotmat_orthonormal(rng):
    angles = np.column_stack([rng.uniform(-math.pi, math.pi, 10000),
                              rng.uniform(-math.pi / 2, math.pi / 2, 10000),
                              rng.uniform(-math.pi, math.pi, 10000)])
    for e in angles:
        R = euler_to_rotmat(e)
        assert np.abs(R.T @ R - np.eye(3)).max() < 1e-9
        assert abs(np.linalg.det(R) - 1.0) < 1e-9
    batch = euler_to_rotmat_batch(*angles.T)
    assert np.abs(np.einsum('nji,njk->nik', batch, batch) - np.eye(3)).max() < 1e-9
    assert np.abs(np.linalg.det(batch) - 1.0).max() < 1e-9
