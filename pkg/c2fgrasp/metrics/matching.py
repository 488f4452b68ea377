import math
import numpy as np

from typing import List, Optional, Sequence

from .thresholds import MatchThresholds, HARD
from .. import config
from ..geometry.distance import FLIP_X, rotation_distance_batch, symmetric_rotation_angle
from ..geometry.pose import GraspPose
from ..transforms import Transform

__all__ = ['pose_match', 'nms', 'rank_by_confidence', 'NMS', 'TopK']


def pose_match(pred: GraspPose, gt: GraspPose, th: MatchThresholds = HARD) -> bool:
    """Whether `pred` lies strictly within both tolerances of `gt`.

    `th.rot_tol` bounds the symmetric relative rotation angle, which is twice the
    `symmetric_rotation_distance` value; a 5 degree tolerance admits a distance
    below 2.5 degrees.
    """
    if np.linalg.norm(pred.translation - gt.translation) >= th.trans_tol:
        return False
    return symmetric_rotation_angle(pred.rotation, gt.rotation) < th.rot_tol


def rank_by_confidence(poses: Sequence[GraspPose]) -> List[GraspPose]:
    """Stable sort by confidence, highest first."""
    return sorted(poses, key=lambda pose: -pose.confidence)


def nms(poses: Sequence[GraspPose], trans_tol: float = 0.02,
        rot_tol: float = math.radians(5.0)) -> List[GraspPose]:
    """Greedy non-maximum suppression of grasp poses.

    Walking the poses by decreasing confidence, a pose is dropped when some
    already kept pose is closer than `trans_tol` in translation AND `rot_tol` in
    symmetric rotation angle. Kept poses retain their order.
    """
    poses = rank_by_confidence(poses)
    if not poses:
        return []
    kept: List[GraspPose] = []
    kept_t = np.empty((len(poses), 3))
    kept_R = np.empty((len(poses), 3, 3))
    # angle = 2 * distance
    half_tol = 0.5 * rot_tol
    for pose in poses:
        n = len(kept)
        if n:
            near = np.linalg.norm(kept_t[:n] - pose.translation, axis=1) < trans_tol
            if near.any():
                R = pose.rotation
                dist = np.minimum(rotation_distance_batch(kept_R[:n], R),
                                  rotation_distance_batch(kept_R[:n], R @ FLIP_X))
                if np.any(near & (dist < half_tol)):
                    continue
        kept_t[n] = pose.translation
        kept_R[n] = pose.rotation
        kept.append(pose)
    return kept


class NMS(Transform):

    def __init__(self, trans_tol: float = 0.02, rot_tol: float = math.radians(5.0)):
        super().__init__()
        self.trans_tol = trans_tol
        self.rot_tol = rot_tol

    def __call__(self, poses: Sequence[GraspPose]) -> List[GraspPose]:
        return nms(poses, self.trans_tol, self.rot_tol)

    def extra_repr(self) -> str:
        return f"trans_tol={self.trans_tol}, rot_tol={self.rot_tol:.6f}"


class TopK(Transform):
    """Keep the `k` most confident poses, `c2fgrasp.max_detections()` by default."""

    def __init__(self, k: Optional[int] = None):
        super().__init__()
        self.k = k

    def __call__(self, poses: Sequence[GraspPose]) -> List[GraspPose]:
        k = config.max_detections() if self.k is None else self.k
        return rank_by_confidence(poses)[:k]

    def extra_repr(self) -> str:
        return f"k={self.k}"
