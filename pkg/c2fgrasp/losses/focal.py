import numpy as np

from typing import Optional, Tuple

from .base import as_cells, positive_mask, Volumes
from .loss_config import LossConfig
from .. import config
from ..data.volume import CONF

__all__ = ['focal_loss', 'focal_terms']


def focal_terms(conf: np.ndarray, mask: np.ndarray, cfg: LossConfig,
                eps: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Per-cell focal terms ``-alpha (1 - q)^gamma log q`` and their derivative
    with respect to the raw confidence.

    `q` is the clipped confidence on positive cells and one minus it elsewhere.
    The derivative is zero wherever clipping is active.
    """
    eps = config.epsilon() if eps is None else eps
    conf = np.asarray(conf, dtype=np.float64)
    clipped = np.clip(conf, eps, 1.0 - eps)
    inside = (conf > eps) & (conf < 1.0 - eps)
    sign = np.where(mask, 1.0, -1.0)
    q = np.where(mask, clipped, 1.0 - clipped)
    log_q = np.log(q)
    one_minus_q = 1.0 - q
    alpha, gamma = cfg.alpha, cfg.gamma

    terms = -alpha * one_minus_q ** gamma * log_q
    d_q = -alpha * one_minus_q ** gamma / q
    if gamma != 0.0:
        d_q = d_q + alpha * gamma * one_minus_q ** (gamma - 1.0) * log_q
    return terms, d_q * sign * inside


def focal_loss(pred: Volumes, positives, cfg: Optional[LossConfig] = None) -> Tuple[float, np.ndarray]:
    """Focal classification loss over every cell, normalized by |S|.

    Parameters:
    ----------
    pred: predicted volumes (or cells of shape (K, n_y, n_z, 8)).
    positives: a `TargetSet` or a sequence of `(point_index, i, j)` triples.
    cfg: loss constants, `LossConfig()` by default.

    Returns:
    ----------
    `(value, gradient)` with the gradient of shape (K, n_y, n_z) taken with
    respect to the confidence channel.

    Raises:
    ----------
    EmptyPositiveSetError: if S is empty.
    """
    cfg = cfg or LossConfig()
    cells = as_cells(pred)
    mask = positive_mask(positives, cells.shape)
    num_positives = int(mask.sum())
    terms, grad = focal_terms(cells[..., CONF], mask, cfg)
    return float(terms.sum() / num_positives), grad / num_positives
