"""Euler angle conversions.

The toolkit-wide convention is extrinsic X-Y-Z, i.e. ``R = R_z(r_z) @ R_y(r_y) @ R_x(r_x)``.
The gripper x-axis is the approach (and two-fold symmetry) axis, so roll ``r_x``
never changes the approach direction encoded by ``(r_y, r_z)``.
"""

import math
import numpy as np

from typing import NamedTuple, Tuple

from ..data_type import is_finite

__all__ = [
    'EulerAngles', 'euler_to_rotmat', 'rotmat_to_euler', 'canonicalize_roll',
    'wrap_angle', 'rot_x', 'rot_y', 'rot_z', 'euler_to_rotmat_batch',
    'euler_jacobian_batch', 'GIMBAL_TOL'
]

_PI = math.pi
_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi

# |cos r_y| below this is treated as gimbal lock
GIMBAL_TOL = 1e-9


class EulerAngles(NamedTuple):
    r_x: float
    r_y: float
    r_z: float
    # set by `rotmat_to_euler` when r_x was forced to 0 at gimbal lock
    gimbal_locked: bool = False


def wrap_angle(angle: float) -> float:
    """Wrap `angle` into [-pi, pi)."""
    angle = float(angle)
    if -_PI <= angle < _PI:
        return angle
    wrapped = (angle + _PI) % _TWO_PI - _PI
    # `%` may round up to exactly pi
    if wrapped >= _PI:
        wrapped -= _TWO_PI
    return wrapped


def canonicalize_roll(e: EulerAngles) -> EulerAngles:
    """Map roll into [-pi/2, pi/2) by whole multiples of pi.

    The gripper is two-fold symmetric about its x-axis, so the result describes the
    same physical grasp; its rotation differs from the input by ``R_x(pi)``
    (right-multiplied) whenever an odd number of half turns was removed.
    """
    r_x, r_y, r_z = float(e[0]), float(e[1]), float(e[2])
    gimbal = bool(e[3]) if len(e) > 3 else False
    if not -_HALF_PI <= r_x < _HALF_PI:
        r_x = (r_x + _HALF_PI) % _PI - _HALF_PI
        if r_x >= _HALF_PI:
            r_x -= _PI
    return EulerAngles(r_x, r_y, r_z, gimbal)


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def euler_to_rotmat(e: EulerAngles) -> np.ndarray:
    """Convert Euler angles to a 3x3 rotation matrix, ``R_z @ R_y @ R_x``.

    Parameters:
    ----------
    e: EulerAngles or any `(r_x, r_y, r_z)` sequence, in radians.

    Returns:
    ----------
    A (3, 3) float64 rotation matrix.

    Raises:
    ----------
    ValueError: if any angle is not finite.
    """
    r_x, r_y, r_z = e[0], e[1], e[2]
    if not is_finite((r_x, r_y, r_z)):
        raise ValueError(f"Euler angles must be finite, but got {tuple(e[:3])}.")
    return euler_to_rotmat_batch(np.float64(r_x), np.float64(r_y), np.float64(r_z))


def rotmat_to_euler(R: np.ndarray) -> EulerAngles:
    """Inverse of `euler_to_rotmat`.

    `r_y` is clamped to [-pi/2, pi/2] and `r_x`, `r_z` are wrapped into [-pi, pi).
    At gimbal lock (|cos r_y| < `GIMBAL_TOL`) only `r_z - r_x` (or `r_z + r_x`) is
    observable, so `r_x` is forced to 0, all of the rotation is folded into `r_z`
    and the result is flagged with `gimbal_locked=True`.
    """
    R = np.asarray(R, dtype=np.float64)
    if R.shape != (3, 3):
        raise ValueError(f"Rotation matrix must have shape (3, 3), but got {R.shape}.")
    sin_y = min(1.0, max(-1.0, -R[2, 0]))
    cos_y = math.hypot(R[2, 1], R[2, 2])
    r_y = math.atan2(sin_y, cos_y)
    if cos_y < GIMBAL_TOL:
        r_y = math.copysign(_HALF_PI, sin_y)
        # with r_x = 0: R[0, 1] = -sin r_z and R[1, 1] = cos r_z for both signs of r_y
        r_z = math.atan2(-R[0, 1], R[1, 1])
        return EulerAngles(0.0, r_y, wrap_angle(r_z), True)

    r_x = math.atan2(R[2, 1], R[2, 2])
    r_z = math.atan2(R[1, 0], R[0, 0])
    return EulerAngles(wrap_angle(r_x), r_y, wrap_angle(r_z), False)


def _axis_factors(r_x, r_y, r_z) -> Tuple[np.ndarray, ...]:
    cx, sx = np.cos(r_x), np.sin(r_x)
    cy, sy = np.cos(r_y), np.sin(r_y)
    cz, sz = np.cos(r_z), np.sin(r_z)
    return cx, sx, cy, sy, cz, sz


def _compose(cx, sx, cy, sy, cz, sz) -> np.ndarray:
    R = np.empty(np.shape(cx) + (3, 3), dtype=np.float64)
    R[..., 0, 0] = cz * cy
    R[..., 0, 1] = cz * sy * sx - sz * cx
    R[..., 0, 2] = cz * sy * cx + sz * sx
    R[..., 1, 0] = sz * cy
    R[..., 1, 1] = sz * sy * sx + cz * cx
    R[..., 1, 2] = sz * sy * cx - cz * sx
    R[..., 2, 0] = -sy
    R[..., 2, 1] = cy * sx
    R[..., 2, 2] = cy * cx
    return R


def euler_to_rotmat_batch(r_x, r_y, r_z) -> np.ndarray:
    """Vectorized `euler_to_rotmat` over broadcastable angle arrays, shape (..., 3, 3)."""
    r_x, r_y, r_z = np.broadcast_arrays(np.asarray(r_x, dtype=np.float64),
                                        np.asarray(r_y, dtype=np.float64),
                                        np.asarray(r_z, dtype=np.float64))
    return _compose(*_axis_factors(r_x, r_y, r_z))


def euler_jacobian_batch(r_x, r_y, r_z) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Partial derivatives of ``R_z R_y R_x`` with respect to r_x, r_y and r_z.

    Each returned array has shape (..., 3, 3).
    """
    r_x, r_y, r_z = np.broadcast_arrays(np.asarray(r_x, dtype=np.float64),
                                        np.asarray(r_y, dtype=np.float64),
                                        np.asarray(r_z, dtype=np.float64))
    cx, sx, cy, sy, cz, sz = _axis_factors(r_x, r_y, r_z)
    # d/dx: (cx, sx) -> (-sx, cx)
    d_x = _compose(-sx, cx, cy, sy, cz, sz)
    d_x[..., :, 0] = 0.0
    d_y = np.empty(np.shape(cx) + (3, 3), dtype=np.float64)
    d_y[..., 0, 0] = -cz * sy
    d_y[..., 0, 1] = cz * cy * sx
    d_y[..., 0, 2] = cz * cy * cx
    d_y[..., 1, 0] = -sz * sy
    d_y[..., 1, 1] = sz * cy * sx
    d_y[..., 1, 2] = sz * cy * cx
    d_y[..., 2, 0] = -cy
    d_y[..., 2, 1] = -sy * sx
    d_y[..., 2, 2] = -sy * cx
    # d/dz: (cz, sz) -> (-sz, cz)
    d_z = _compose(cx, sx, cy, sy, -sz, cz)
    d_z[..., 2, :] = 0.0
    return d_x, d_y, d_z
