import numpy as np

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .base import as_cells, check_shapes, positive_mask, Volumes
from .focal import focal_terms
from .loss_config import LossConfig
from .rotation import rotation_terms
from .translation import translation_terms
from ..codec.target_set import TargetSet
from ..data.volume import CONF, DX, DZ, DRY, NUM_CHANNELS
from ..utils.table import render_table

__all__ = ['LossReport', 'total_loss', 'cell_losses']


@dataclass
class LossReport:
    cls: float
    rot: float
    trans: float
    total: float
    # d total / d pred, shape (K, n_y, n_z, 8)
    gradients: np.ndarray = field(repr=False)

    def show(self) -> str:
        rows = [["cls", self.cls], ["rot", self.rot], ["trans", self.trans], ["total", self.total],
                ["max |grad|", float(np.abs(self.gradients).max(initial=0.0))]]
        return render_table(["term", "value"], rows, precision=9)


def cell_losses(pred_cells: np.ndarray, target_cells: np.ndarray, mask: np.ndarray,
                cfg: LossConfig) -> Tuple[Tuple[np.ndarray, np.ndarray, np.ndarray], np.ndarray]:
    """Unnormalized per-cell loss terms and the per-cell gradient of the combined loss.

    Returns `((cls, rot, trans), gradient)`: three (K, n_y, n_z) term grids and a
    (K, n_y, n_z, 8) gradient, neither divided by |S|. Every term depends on the
    channels of its own cell only.
    """
    shape = pred_cells.shape[:3]
    cls_terms, cls_grad = focal_terms(pred_cells[..., CONF], mask, cfg)

    index = np.argwhere(mask)
    rot_terms = np.zeros(shape, dtype=np.float64)
    rot_grad = np.zeros(shape + (4,), dtype=np.float64)
    if index.size:
        terms, grad = rotation_terms(pred_cells, target_cells, index)
        rot_terms[index[:, 0], index[:, 1], index[:, 2]] = terms
        rot_grad[index[:, 0], index[:, 1], index[:, 2]] = grad

    trans_terms, trans_grad = translation_terms(pred_cells, target_cells, mask, cfg)

    gradient = np.empty(shape + (NUM_CHANNELS,), dtype=np.float64)
    gradient[..., CONF] = cfg.lambda_cls * cls_grad
    gradient[..., DX:DZ + 1] = trans_grad
    gradient[..., DRY:] = cfg.lambda_rot * rot_grad
    return (cls_terms, rot_terms, trans_terms), gradient


def total_loss(pred: Volumes, targets: TargetSet, cfg: Optional[LossConfig] = None) -> LossReport:
    """``lambda_cls * cls + lambda_rot * rot + trans`` with its gradient grid.

    Gradient channels follow the cell layout: confidence, the three translation
    offsets, then the four rotation channels.
    """
    cfg = cfg or LossConfig()
    pred_cells = as_cells(pred)
    target_cells = as_cells(targets.volumes)
    check_shapes(pred_cells, target_cells)
    mask = positive_mask(targets, pred_cells.shape)
    num_positives = int(mask.sum())

    (cls_terms, rot_terms, trans_terms), gradient = cell_losses(pred_cells, target_cells, mask, cfg)
    cls = float(cls_terms.sum() / num_positives)
    rot = float(rot_terms.sum() / num_positives)
    trans = float(trans_terms.sum() / num_positives)
    total = cfg.lambda_cls * cls + cfg.lambda_rot * rot + trans
    return LossReport(cls, rot, trans, total, gradient / num_positives)
