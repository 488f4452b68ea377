import numpy as np

from typing import Optional, Tuple

from .base import as_cells, check_shapes, positive_mask, Volumes
from .loss_config import LossConfig
from ..codec.target_set import TargetSet
from ..data.volume import DX, DZ

__all__ = ['translation_loss', 'translation_terms']


def translation_terms(pred_cells: np.ndarray, target_cells: np.ndarray, mask: np.ndarray,
                      cfg: LossConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Per-cell weighted L1 terms (K, n_y, n_z) and gradients (K, n_y, n_z, 3), zero off S."""
    weights = np.array([cfg.lambda_x, cfg.lambda_y, cfg.lambda_z])
    diff = pred_cells[..., DX:DZ + 1] - target_cells[..., DX:DZ + 1]
    diff = np.where(mask[..., None], diff, 0.0)
    terms = np.sum(weights * np.abs(diff), axis=-1)
    # np.sign(0) == 0 gives the zero subgradient at exact equality
    return terms, weights * np.sign(diff)


def translation_loss(pred: Volumes, targets: TargetSet,
                     cfg: Optional[LossConfig] = None) -> Tuple[float, np.ndarray]:
    """Weighted L1 error of the normalized translation over S."""
    cfg = cfg or LossConfig()
    pred_cells = as_cells(pred)
    target_cells = as_cells(targets.volumes)
    check_shapes(pred_cells, target_cells)
    mask = positive_mask(targets, pred_cells.shape)
    num_positives = int(mask.sum())
    terms, grad = translation_terms(pred_cells, target_cells, mask, cfg)
    return float(terms.sum() / num_positives), grad / num_positives
