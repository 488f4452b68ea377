import numpy as np

from scipy.spatial.transform import Rotation
from typing import List

from .average_precision import GroundTruth, _good_poses
from ..geometry.pose import GraspPose

__all__ = ['perturb_gt']


def perturb_gt(gts: GroundTruth, sigma_t: float, sigma_r: float, seed: int) -> List[GraspPose]:
    """A synthetic detector: noisy copies of the good ground-truth grasps.

    Each translation gets isotropic Gaussian noise of `sigma_t` meters; each
    rotation is composed with a rotation about a uniformly random axis by
    ``|N(0, sigma_r)|`` radians. The i-th output has confidence ``1 / (1 + i)``.
    """
    sigma_t, sigma_r = float(sigma_t), float(sigma_r)
    if not (sigma_t >= 0 and sigma_r >= 0):
        raise ValueError(f"Noise levels must be non-negative, but got ({sigma_t}, {sigma_r}).")
    poses = _good_poses(gts)
    n = len(poses)
    if n == 0:
        return []

    rng = np.random.default_rng(seed)
    t_noise = rng.normal(0.0, sigma_t, size=(n, 3))
    axes = rng.normal(size=(n, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    angles = np.abs(rng.normal(0.0, sigma_r, size=n))
    noise = Rotation.from_rotvec(axes * angles[:, None]).as_matrix()

    return [GraspPose(noise[ix] @ pose.rotation, pose.translation + t_noise[ix], 1.0 / (1.0 + ix))
            for ix, pose in enumerate(poses)]
