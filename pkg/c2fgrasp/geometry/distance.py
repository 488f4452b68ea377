"""Rotation distances on SO(3).

`rotation_distance` is the arcsin form of the Frobenius metric,
``arcsin(||I - R1 R2^T||_F / (2 sqrt 2))``, which equals half of the angle of the
relative rotation ``R1 R2^T`` and ranges over [0, pi/2].
"""

import math
import numpy as np

__all__ = [
    'rotation_distance', 'rotation_distance_batch', 'symmetric_rotation_distance',
    'rotation_angle', 'symmetric_rotation_angle', 'FLIP_X'
]

# half turn about the gripper x-axis, the gripper's symmetry
FLIP_X = np.diag([1.0, -1.0, -1.0])

_SCALE = 1.0 / (2.0 * math.sqrt(2.0))


def rotation_distance(R1: np.ndarray, R2: np.ndarray) -> float:
    """Distance between two rotations in radians, within [0, pi/2].

    The arcsin argument is clamped to [0, 1] to absorb floating-point drift.

    Example:
    --------
    >>> rotation_distance(np.eye(3), rot_z(np.pi / 2))  # pi / 4
    0.7853981633974483
    """
    diff = np.eye(3) - np.asarray(R1, dtype=np.float64) @ np.asarray(R2, dtype=np.float64).T
    value = math.sqrt(float(np.sum(diff * diff))) * _SCALE
    return math.asin(min(1.0, max(0.0, value)))


def rotation_distance_batch(R1: np.ndarray, R2: np.ndarray) -> np.ndarray:
    """Vectorized `rotation_distance` for broadcastable stacks of shape (..., 3, 3)."""
    R1 = np.asarray(R1, dtype=np.float64)
    R2 = np.asarray(R2, dtype=np.float64)
    diff = np.eye(3) - R1 @ np.swapaxes(R2, -1, -2)
    value = np.sqrt(np.sum(diff * diff, axis=(-2, -1))) * _SCALE
    return np.arcsin(np.clip(value, 0.0, 1.0))


def symmetric_rotation_distance(R1: np.ndarray, R2: np.ndarray) -> float:
    """`rotation_distance` up to the gripper's half-turn symmetry about its x-axis."""
    R2 = np.asarray(R2, dtype=np.float64)
    return min(rotation_distance(R1, R2), rotation_distance(R1, R2 @ FLIP_X))


def rotation_angle(R1: np.ndarray, R2: np.ndarray) -> float:
    """Angle of the relative rotation ``R1 R2^T``, within [0, pi]."""
    return 2.0 * rotation_distance(R1, R2)


def symmetric_rotation_angle(R1: np.ndarray, R2: np.ndarray) -> float:
    return 2.0 * symmetric_rotation_distance(R1, R2)
