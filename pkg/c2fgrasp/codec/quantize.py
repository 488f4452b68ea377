import math
import numpy as np

from typing import Optional, Tuple

from .. import config
from ..data_type import is_finite

__all__ = ['quantize_orientation', 'decode_angles', 'coarse_angles']

_PI = math.pi
# largest residual, so that residuals stay in [0, 1)
_BELOW_ONE = float(np.nextafter(1.0, 0.0))


def _grid(n_y: Optional[int], n_z: Optional[int]) -> Tuple[int, int]:
    default_y, default_z = config.grid_shape()
    n_y = default_y if n_y is None else int(n_y)
    n_z = default_z if n_z is None else int(n_z)
    if n_y < 1 or n_z < 1:
        raise ValueError(f"Grid sizes must be positive, but got ({n_y}, {n_z}).")
    return n_y, n_z


def _split(u: float, n: int) -> Tuple[int, float]:
    """Bin index and residual of a position `u` in [0, n] on an n-bin axis."""
    i = int(math.floor(u))
    if i >= n:
        # the upper seam, or a value that rounded onto it, stays in the last bin
        return n - 1, _BELOW_ONE
    i = max(i, 0)
    return i, min(u - i, _BELOW_ONE)


def quantize_orientation(r_y: float, r_z: float, n_y: Optional[int] = None,
                         n_z: Optional[int] = None) -> Tuple[int, int, float, float]:
    """Split `(r_y, r_z)` into a coarse cell `(i, j)` and residual fractions.

    Cell `(i, j)` covers the half-open interval that starts at its anchor
    ``(pi/n_y * i - pi/2, 2pi/n_z * j - pi)``, so residuals lie in [0, 1). Angles on the upper
    seam, ``r_y = pi/2`` or an `r_z` that rounds onto ``pi``, go to the last bin
    with the largest residual below 1.

    Parameters:
    ----------
    r_y: pitch in [-pi/2, pi/2].
    r_z: yaw in [-pi, pi).
    n_y, n_z: grid size, `c2fgrasp.grid_shape()` by default.

    Returns:
    ----------
    `(i, j, d_ry, d_rz)`.

    Raises:
    ----------
    ValueError: for non-finite or out-of-range angles.
    """
    n_y, n_z = _grid(n_y, n_z)
    if not is_finite((r_y, r_z)):
        raise ValueError(f"Angles must be finite, but got ({r_y}, {r_z}).")
    if not -0.5 * _PI <= r_y <= 0.5 * _PI:
        raise ValueError(f"r_y must lie in [-pi/2, pi/2], but got {r_y}.")
    if not -_PI <= r_z < _PI:
        raise ValueError(f"r_z must lie in [-pi, pi), but got {r_z}.")

    i, d_ry = _split((r_y / _PI + 0.5) * n_y, n_y)
    j, d_rz = _split((r_z / (2.0 * _PI) + 0.5) * n_z, n_z)
    return i, j, d_ry, d_rz


def decode_angles(i: float, j: float, d_ry: float, d_rz: float, n_y: int,
                  n_z: int) -> Tuple[float, float]:
    """Recover `(r_y, r_z)` from a cell index and its residuals."""
    r_y = _PI / n_y * (i + d_ry) - 0.5 * _PI
    r_z = 2.0 * _PI / n_z * (j + d_rz) - _PI
    return r_y, r_z


def coarse_angles(i: int, j: int, n_y: int, n_z: int) -> Tuple[float, float]:
    """Anchor orientation of cell `(i, j)`, i.e. zero residuals."""
    return decode_angles(i, j, 0.0, 0.0, n_y, n_z)
