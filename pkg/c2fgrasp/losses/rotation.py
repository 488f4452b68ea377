import math
import numpy as np

from typing import Optional, Tuple

from .base import as_cells, check_shapes, positive_mask, Volumes
from .loss_config import LossConfig
from ..codec.target_set import TargetSet
from ..data.volume import DRY, DRZ, COS, SIN
from ..errors import DegenerateRollError
from ..geometry.euler import euler_to_rotmat_batch, euler_jacobian_batch

__all__ = ['rotation_loss', 'rotation_terms', 'decode_rotations']

_HALF_PI = 0.5 * math.pi
# terms below this are treated as the minimum, where the subgradient is zero
_ZERO_TOL = 1e-12


def _decode_angles(values: np.ndarray, i: np.ndarray, j: np.ndarray, n_y: int, n_z: int):
    c, s = values[:, COS], values[:, SIN]
    r_x = 0.5 * np.arctan2(s, c)
    r_x = np.where(r_x >= _HALF_PI, r_x - math.pi, r_x)
    r_y = math.pi / n_y * (i + values[:, DRY]) - _HALF_PI
    r_z = 2.0 * math.pi / n_z * (j + values[:, DRZ]) - math.pi
    return r_x, r_y, r_z


def decode_rotations(cells: np.ndarray, index: np.ndarray) -> np.ndarray:
    """Rotation matrices (P, 3, 3) decoded from the cells at `index` (P, 3)."""
    n_y, n_z = cells.shape[1:3]
    values = cells[index[:, 0], index[:, 1], index[:, 2]]
    return euler_to_rotmat_batch(*_decode_angles(values, index[:, 1], index[:, 2], n_y, n_z))


def rotation_terms(pred_cells: np.ndarray, target_cells: np.ndarray,
                   index: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-positive ``||I - R_pred R_target^T||_F`` and its gradient with respect to
    the four rotation channels `(d_ry, d_rz, theta_cos, theta_sin)`.

    Returns arrays of shape (P,) and (P, 4). The gradient is zero where the term is.
    """
    n_y, n_z = pred_cells.shape[1:3]
    values = pred_cells[index[:, 0], index[:, 1], index[:, 2]]
    c, s = values[:, COS], values[:, SIN]
    norm2 = c * c + s * s
    degenerate = np.flatnonzero(norm2 == 0.0)
    if degenerate.size:
        k, i, j = index[degenerate[0]]
        raise DegenerateRollError(f"Predicted cell ({k}, {i}, {j}) has a zero roll pair.")

    r_x, r_y, r_z = _decode_angles(values, index[:, 1], index[:, 2], n_y, n_z)
    R_pred = euler_to_rotmat_batch(r_x, r_y, r_z)
    R_target = decode_rotations(target_cells, index)
    A = np.eye(3) - R_pred @ np.swapaxes(R_target, -1, -2)
    terms = np.sqrt(np.sum(A * A, axis=(-2, -1)))

    # d term / d R_pred = -A R_target / term
    at_minimum = terms < _ZERO_TOL
    safe = np.where(at_minimum, 1.0, terms)
    G = -(A @ R_target) / safe[:, None, None]
    G[at_minimum] = 0.0
    d_x, d_y, d_z = euler_jacobian_batch(r_x, r_y, r_z)
    g_x = np.sum(G * d_x, axis=(-2, -1))
    g_y = np.sum(G * d_y, axis=(-2, -1))
    g_z = np.sum(G * d_z, axis=(-2, -1))

    grad = np.empty((index.shape[0], 4), dtype=np.float64)
    grad[:, 0] = g_y * math.pi / n_y
    grad[:, 1] = g_z * 2.0 * math.pi / n_z
    grad[:, 2] = -0.5 * g_x * s / norm2
    grad[:, 3] = 0.5 * g_x * c / norm2
    return terms, grad


def rotation_loss(pred: Volumes, targets: TargetSet,
                  cfg: Optional[LossConfig] = None) -> Tuple[float, np.ndarray]:
    """Mean Frobenius rotation error over S.

    Each positive cell is decoded with its own `(i, j)` from the predicted and
    the target rotation channels.

    Returns:
    ----------
    `(value, gradient)`, the gradient of shape (K, n_y, n_z, 4) over
    `(d_ry, d_rz, theta_cos, theta_sin)` and zero off S.
    """
    pred_cells = as_cells(pred)
    target_cells = as_cells(targets.volumes)
    check_shapes(pred_cells, target_cells)
    mask = positive_mask(targets, pred_cells.shape)
    index = np.argwhere(mask)
    terms, grad = rotation_terms(pred_cells, target_cells, index)
    num_positives = index.shape[0]
    full = np.zeros(pred_cells.shape[:3] + (4,), dtype=np.float64)
    full[index[:, 0], index[:, 1], index[:, 2]] = grad / num_positives
    return float(terms.sum() / num_positives), full
