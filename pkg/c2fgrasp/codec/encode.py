import logging
import numpy as np

from typing import Dict, Optional, Tuple

from .quantize import quantize_orientation, coarse_angles, _grid
from .target_set import TargetSet
from ..data.label_set import GraspLabelSet
from ..data.volume import C2FCell, C2FVolume
from ..geometry.distance import rotation_distance
from ..geometry.euler import euler_to_rotmat
from ..geometry.gripper import GripperGeometry, default_gripper, enclosed_mask
from ..transforms import Transform
from ..typing import CellIndex

__all__ = ['encode_labels', 'EncodeLabels']

logger = logging.getLogger(__name__)

_CENTER = np.full(3, 0.5)


def encode_labels(grasp_points: np.ndarray, gt: GraspLabelSet,
                  gripper: Optional[GripperGeometry] = None,
                  n_y: Optional[int] = None, n_z: Optional[int] = None) -> TargetSet:
    """Build target volumes and the positive set S from good ground-truth grasps.

    Every good grasp is roll-canonicalized, then each grasp point inside its
    closing region marks the cell of its quantized `(r_y, r_z)`. When several
    grasps land on the same `(point, i, j)` the winner is, in order: the smallest
    rotation distance to the cell's coarse rotation, the smallest distance of the
    normalized translation from the box center, the lowest grasp index.

    Parameters:
    ----------
    grasp_points: (K, 3) array, K >= 1.
    gt: ground-truth label set; bad grasps are ignored.
    gripper: gripper dimensions, the default gripper if None.
    n_y, n_z: grid size, `c2fgrasp.grid_shape()` by default.

    Returns:
    ----------
    A `TargetSet` with one volume per grasp point.
    """
    gripper = gripper or default_gripper()
    n_y, n_z = _grid(n_y, n_z)
    points = np.asarray(grasp_points, dtype=np.float64).reshape(-1, 3)
    if points.shape[0] == 0:
        raise ValueError("Need at least one grasp point.")

    best: Dict[CellIndex, Tuple[Tuple[float, float, int], C2FCell]] = {}
    for gt_index in gt.good_indices:
        pose = gt.grasps[gt_index].canonical()
        inside = np.flatnonzero(enclosed_mask(points, pose, gripper))
        if inside.size == 0:
            continue
        e = pose.euler
        i, j, d_ry, d_rz = quantize_orientation(e.r_y, e.r_z, n_y, n_z)
        anchor_y, anchor_z = coarse_angles(i, j, n_y, n_z)
        residual = rotation_distance(pose.rotation, euler_to_rotmat((e.r_x, anchor_y, anchor_z)))
        normalized = gripper.normalize(gripper.region_coords(points[inside], pose))
        roll = (np.cos(2.0 * e.r_x), np.sin(2.0 * e.r_x))
        for k, coords in zip(inside, normalized):
            cell = (int(k), i, j)
            key = (residual, float(np.linalg.norm(coords - _CENTER)), gt_index)
            if cell in best and best[cell][0] <= key:
                continue
            values = C2FCell(1.0, *coords, d_ry, d_rz, *roll)
            best[cell] = (key, values)

    volumes = [C2FVolume.zeros(p, n_y, n_z) for p in points]
    for (k, i, j), (_, values) in best.items():
        volumes[k].set_cell(i, j, values)
    assignments = {cell: key[2] for cell, (key, _) in best.items()}
    logger.info(f"Encoded {gt.num_good} good grasp(s) into {len(best)} positive cell(s) "
                f"over {points.shape[0]} grasp point(s).")
    return TargetSet(volumes, list(best), assignments)


class EncodeLabels(Transform):

    def __init__(self, gripper: Optional[GripperGeometry] = None,
                 n_y: Optional[int] = None, n_z: Optional[int] = None):
        super().__init__()
        self.gripper = gripper or default_gripper()
        self.n_y, self.n_z = _grid(n_y, n_z)

    def __call__(self, grasp_points: np.ndarray, gt: GraspLabelSet) -> TargetSet:
        return encode_labels(grasp_points, gt, self.gripper, self.n_y, self.n_z)

    def extra_repr(self) -> str:
        return f"n_y={self.n_y}, n_z={self.n_z}"
