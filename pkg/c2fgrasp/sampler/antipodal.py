import math
import numpy as np

from typing import Optional

from ..data.label_set import Quality
from ..data.point_cloud import PointCloud
from ..geometry.gripper import GripperGeometry, default_gripper
from ..geometry.pose import GraspPose

__all__ = ['label_antipodal', 'finger_contacts']


def finger_contacts(pose: GraspPose, cloud: PointCloud, gripper: GripperGeometry,
                    tolerance: float = 0.002):
    """Indices of the contact points of the two fingers.

    The fingers close along the gripper y-axis until they touch the enclosed
    points, so the contacts are the enclosed points within `tolerance` of the
    largest (positive finger) and smallest (negative finger) closing coordinate.
    Only points with a valid normal take part.
    """
    coords = gripper.region_coords(cloud.points, pose)
    inside = np.flatnonzero(gripper.in_closing_region(coords) & cloud.valid)
    if inside.size == 0:
        return inside, inside
    y = coords[inside, 1]
    positive = inside[y >= y.max() - tolerance]
    negative = inside[y <= y.min() + tolerance]
    return positive, negative


def label_antipodal(pose: GraspPose, cloud: PointCloud, gripper: Optional[GripperGeometry] = None,
                    mu: float = 0.3, tolerance: float = 0.002) -> Quality:
    """Antipodal test of a grasp against a cloud with outward normals.

    Good iff the positive finger has a contact whose normal lies inside the
    friction cone (half-angle ``arctan(mu)``) around the closing axis and the
    negative finger has one inside the opposite cone.

    Raises:
    ----------
    ValueError: if the cloud has no normals or `mu` is not positive.
    """
    gripper = gripper or default_gripper()
    if not cloud.has_normals:
        raise ValueError("The antipodal test needs a cloud with normals.")
    if not mu > 0:
        raise ValueError(f"Friction coefficient must be strictly positive, but got {mu}.")
    positive, negative = finger_contacts(pose, cloud, gripper, tolerance)
    if positive.size == 0 or negative.size == 0:
        return Quality.BAD
    cone_cos = math.cos(math.atan(mu))
    closing = pose.rotation[:, 1]
    good_positive = np.any(cloud.normals[positive] @ closing >= cone_cos)
    good_negative = np.any(cloud.normals[negative] @ closing <= -cone_cos)
    return Quality.GOOD if good_positive and good_negative else Quality.BAD
