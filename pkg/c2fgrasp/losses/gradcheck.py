import logging
import numpy as np

from typing import List, Optional

from .base import as_cells, check_shapes, positive_mask, Volumes
from .loss_config import LossConfig
from .rotation import rotation_terms
from .total import cell_losses
from .. import config
from ..codec.target_set import TargetSet
from ..data.volume import C2FVolume, CONF, DX, DZ, DRY, COS, SIN, NUM_CHANNELS

__all__ = ['gradcheck', 'random_prediction', 'perturb_cells']

logger = logging.getLogger(__name__)

# distance to an |x| kink or a clipping bound below which a channel is skipped
_KINK_TOL = 1e-4
_ATOL = 1e-4
# rotation terms below this are too close to the non-differentiable minimum
_ROT_TOL = 1e-3
_CONF_RANGE = (0.01, 0.99)


def perturb_cells(cells: np.ndarray, scale: float, seed: int) -> np.ndarray:
    """Add seeded Gaussian noise of `scale` to every channel, keeping confidences
    inside (0.01, 0.99)."""
    rng = np.random.default_rng(seed)
    cells = np.array(cells, dtype=np.float64)
    cells += rng.normal(0.0, scale, size=cells.shape)
    cells[..., CONF] = np.clip(cells[..., CONF], *_CONF_RANGE)
    return cells


def random_prediction(targets: TargetSet, seed: int, scale: float = 0.05) -> List[C2FVolume]:
    """Prediction volumes scattered around `targets` for loss and gradient checks."""
    cells = perturb_cells(as_cells(targets.volumes), scale, seed)
    return [C2FVolume(volume.grasp_point, c) for volume, c in zip(targets.volumes, cells)]


def _combined(pred_cells, target_cells, mask, cfg, num_positives):
    (cls_terms, rot_terms, trans_terms), gradient = cell_losses(pred_cells, target_cells, mask, cfg)
    terms = cfg.lambda_cls * cls_terms + cfg.lambda_rot * rot_terms + trans_terms
    return terms / num_positives, gradient / num_positives


def _smooth_mask(cells: np.ndarray, target_cells: np.ndarray, mask: np.ndarray,
                 step: float) -> np.ndarray:
    """Channels where central differences are meaningful, shape (K, n_y, n_z, 8)."""
    eps = config.epsilon()
    tol = max(_KINK_TOL, 2.0 * step)
    smooth = np.ones(cells.shape, dtype=bool)
    conf = cells[..., CONF]
    smooth[..., CONF] = (np.abs(conf - eps) > tol) & (np.abs(conf - (1.0 - eps)) > tol)

    trans_diff = np.abs(cells[..., DX:DZ + 1] - target_cells[..., DX:DZ + 1])
    smooth[..., DX:DZ + 1] = ~mask[..., None] | (trans_diff > tol)

    index = np.argwhere(mask)
    if index.size:
        values = cells[index[:, 0], index[:, 1], index[:, 2]]
        c, s = values[:, COS], values[:, SIN]
        terms, _ = rotation_terms(cells, target_cells, index)
        # the Frobenius norm is not differentiable at zero, atan2 jumps across c < 0, s = 0
        ok = (terms > max(tol, _ROT_TOL)) & (c * c + s * s > tol) & ~((c < 0.0) & (np.abs(s) < tol))
        smooth[index[:, 0], index[:, 1], index[:, 2], DRY:] = ok[:, None]
    return smooth


def gradcheck(pred: Volumes, targets: TargetSet, cfg: Optional[LossConfig] = None,
              step: float = 1e-6, seed: int = 0, scale: float = 0.05) -> float:
    """Compare the analytic gradient of `total_loss` with central differences.

    The check runs at a seeded random perturbation of `pred`. Every loss term
    depends on its own cell only, so one channel is perturbed in all cells at
    once and the per-cell terms yield every partial derivative from 16 loss
    evaluations. Channels near |x| kinks, clipping bounds or the roll branch cut
    are skipped.

    Parameters:
    ----------
    pred: predicted volumes, shaped like `targets`.
    targets: target set with a non-empty S.
    cfg: loss constants, `LossConfig()` by default.
    step: finite-difference step in (0, 1e-3].
    seed: seed of the perturbation.
    scale: standard deviation of the perturbation.

    Returns:
    ----------
    The maximum relative error ``|a - n| / max(|a|, |n|, 1e-4)`` over all checked
    channels, 0.0 if none could be checked.
    """
    if not 0.0 < step <= 1e-3:
        raise ValueError(f"step must lie in (0, 1e-3], but got {step}.")
    cfg = cfg or LossConfig()
    target_cells = as_cells(targets.volumes)
    cells = perturb_cells(as_cells(pred), scale, seed)
    check_shapes(cells, target_cells)
    mask = positive_mask(targets, cells.shape)
    num_positives = int(mask.sum())

    _, analytic = _combined(cells, target_cells, mask, cfg, num_positives)
    numeric = np.empty_like(analytic)
    for channel in range(NUM_CHANNELS):
        plus = cells.copy()
        plus[..., channel] += step
        minus = cells.copy()
        minus[..., channel] -= step
        f_plus, _ = _combined(plus, target_cells, mask, cfg, num_positives)
        f_minus, _ = _combined(minus, target_cells, mask, cfg, num_positives)
        numeric[..., channel] = (f_plus - f_minus) / (2.0 * step)

    smooth = _smooth_mask(cells, target_cells, mask, step)
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), _ATOL)
    errors = np.abs(analytic - numeric) / denom
    checked = int(smooth.sum())
    max_error = float(errors[smooth].max()) if checked else 0.0
    logger.info(f"gradcheck: {checked} channel(s) checked, "
                f"{smooth.size - checked} skipped, max relative error {max_error:.3e}.")
    return max_error
