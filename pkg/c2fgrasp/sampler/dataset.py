import logging

from typing import Optional

from .antipodal import label_antipodal
from .candidates import sample_candidates
from .normals import estimate_normals
from .sampler_config import SamplerConfig
from ..data.label_set import GraspLabelSet
from ..data.point_cloud import PointCloud
from ..geometry.gripper import GripperGeometry, default_gripper
from ..typing import Vector3

__all__ = ['generate_dataset']

logger = logging.getLogger(__name__)


def generate_dataset(cloud: PointCloud, gripper: Optional[GripperGeometry] = None,
                     cfg: Optional[SamplerConfig] = None, viewpoint: Optional[Vector3] = None,
                     source: str = "", verbose: bool = False) -> GraspLabelSet:
    """Sample and label ground-truth grasps on a point cloud.

    Normals are estimated unless the cloud already carries them; `viewpoint`
    orients estimated normals (None: away from the centroid). Colliding
    candidates are discarded, the rest are labeled by the antipodal test.
    """
    gripper = gripper or default_gripper()
    cfg = cfg or SamplerConfig()
    if len(cloud) == 0:
        logger.warning("Empty cloud, no grasps sampled.")
        return GraspLabelSet([], [], source)

    if not cloud.has_normals:
        k = cfg.neighbors_k
        if len(cloud) < k:
            logger.warning(f"Cloud has only {len(cloud)} point(s), using k={len(cloud)} "
                           f"instead of {k} for normal estimation.")
            k = len(cloud)
        cloud = estimate_normals(cloud, k, viewpoint)

    grasps = sample_candidates(cloud, gripper, cfg, verbose=verbose)
    labels = [label_antipodal(pose, cloud, gripper, cfg.friction_mu, cfg.contact_tolerance)
              for pose in grasps]
    label_set = GraspLabelSet(grasps, labels, source)
    logger.info(f"Generated {label_set.num_good} good and {label_set.num_bad} bad grasp(s).")
    return label_set
