from typing import Sequence, Tuple, Union

import numpy as np

from ..codec.target_set import TargetSet
from ..data.volume import C2FVolume, stack_volumes
from ..errors import EmptyPositiveSetError
from ..typing import PositiveSet

__all__ = ['as_cells', 'positive_mask', 'check_shapes', 'Volumes']

Volumes = Union[Sequence[C2FVolume], np.ndarray]


def as_cells(volumes: Volumes) -> np.ndarray:
    """Volumes (or a ready cell array) as float64 cells of shape (K, n_y, n_z, 8)."""
    if isinstance(volumes, np.ndarray):
        cells = volumes
    else:
        _, cells = stack_volumes(volumes)
    cells = np.asarray(cells, dtype=np.float64)
    if cells.ndim != 4:
        raise ValueError(f"Expected cells of shape (K, n_y, n_z, 8), but got {cells.shape}.")
    return cells


def positive_mask(positives: Union[TargetSet, PositiveSet],
                  shape: Tuple[int, ...]) -> np.ndarray:
    """Boolean (K, n_y, n_z) mask of S; raises if S is empty."""
    cells = positives.positives if isinstance(positives, TargetSet) else list(positives)
    if not cells:
        raise EmptyPositiveSetError("The positive set S is empty, the loss normalization is undefined.")
    mask = np.zeros(shape[:3], dtype=bool)
    index = np.asarray(cells, dtype=np.int64).reshape(-1, 3)
    for axis, size in enumerate(shape[:3]):
        if index[:, axis].min() < 0 or index[:, axis].max() >= size:
            raise ValueError(f"Positive cells fall outside the prediction grid {shape[:3]}.")
    mask[index[:, 0], index[:, 1], index[:, 2]] = True
    return mask


def check_shapes(pred: np.ndarray, target: np.ndarray) -> None:
    if pred.shape != target.shape:
        raise ValueError(
            f"Prediction and target shapes don't agree: {pred.shape} vs {target.shape}.")
