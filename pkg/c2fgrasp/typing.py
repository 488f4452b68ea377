"""Types for typing functions signatures."""

from typing import Union, Tuple, Sequence, Set

import numpy as np

Vector3 = Union[np.ndarray, Sequence[float], Tuple[float, float, float]]
Matrix3 = Union[np.ndarray, Sequence[Sequence[float]]]

# (point-index, i, j) of one cell of a C2F volume
CellIndex = Tuple[int, int, int]
PositiveSet = Union[Set[CellIndex], Sequence[CellIndex]]
