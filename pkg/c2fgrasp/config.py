"""Process-wide numeric defaults, in the spirit of the Keras backend config API."""

from typing import Tuple

__all__ = [
    'epsilon', 'set_epsilon', 'floatx', 'set_floatx', 'grid_shape',
    'set_grid_shape', 'max_detections', 'set_max_detections'
]

# clipping bound for predicted confidences inside the focal loss
_EPSILON = 1e-7

_FLOAT_TYPES = {'float32', 'float64'}
# in-memory float type, files are always little-endian float32
_FLOATX = 'float64'

# (N_y, N_z) of the coarse orientation grid
_GRID_SHAPE = (24, 25)

# top-k detections scored by the AP metric
_MAX_DETECTIONS = 10


def epsilon() -> float:
    """Returns the confidence clipping value used by the focal loss.

    Example:
    --------
    >>> c2fgrasp.epsilon()
    1e-07
    """
    return _EPSILON


def set_epsilon(value: float) -> float:
    """Sets the confidence clipping value.

    Raises:
    --------
    ValueError: if `value` is not in (0, 0.5).
    """
    value = float(value)
    if not 0.0 < value < 0.5:
        raise ValueError(
            f"epsilon must lie in (0, 0.5), but got {value}.")
    global _EPSILON
    _EPSILON = value
    return _EPSILON


def floatx() -> str:
    """Returns the default float type, as a string.

    E.g. `'float32'`, `'float64'`.
    """
    return _FLOATX


def set_floatx(dtype: str) -> str:
    """Sets the default float type.

    Parameters:
    --------
    dtype: String; `'float32'` or `'float64'`.

    Raises:
    --------
    ValueError: In case of invalid value.
    """
    if dtype not in _FLOAT_TYPES:
        raise ValueError(
            f"Unknown floatx type: '{str(dtype)}', expected one of {_FLOAT_TYPES}."
        )
    global _FLOATX
    _FLOATX = str(dtype)
    return _FLOATX


def grid_shape() -> Tuple[int, int]:
    """Returns the default coarse grid shape `(n_y, n_z)`.

    Example:
    --------
    >>> c2fgrasp.grid_shape()
    (24, 25)
    """
    return _GRID_SHAPE


def set_grid_shape(n_y: int, n_z: int) -> Tuple[int, int]:
    """Sets the default coarse grid shape.

    Raises:
    --------
    ValueError: if either size is not a positive integer.
    """
    for name, value in (('n_y', n_y), ('n_z', n_z)):
        if int(value) != value or value < 1:
            raise ValueError(
                f"{name} must be a positive integer, but got {value}.")
    global _GRID_SHAPE
    _GRID_SHAPE = (int(n_y), int(n_z))
    return _GRID_SHAPE


def max_detections() -> int:
    """Returns how many top-ranked detections the AP metric scores."""
    return _MAX_DETECTIONS


def set_max_detections(k: int) -> int:
    if int(k) != k or k < 1:
        raise ValueError(
            f"max_detections must be a positive integer, but got {k}.")
    global _MAX_DETECTIONS
    _MAX_DETECTIONS = int(k)
    return _MAX_DETECTIONS
