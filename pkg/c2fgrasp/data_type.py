import numpy as np

from typing import Any

__all__ = [
    'is_listlike',
    'is_finite',
]


def is_listlike(x: Any) -> bool:
    """Check whether `x` is list like, e.g., Tuple or List.

    Parameters:
    ----------
    x: A python object to check.
    Returns:
    ----------
    `True` iff `x` is a list like sequence.
    """
    return isinstance(x, (list, tuple))


def is_finite(x: Any) -> bool:
    """Check whether every entry of the scalar or array `x` is finite."""
    return bool(np.all(np.isfinite(np.asarray(x, dtype=np.float64))))
