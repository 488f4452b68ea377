import numpy as np

from scipy.spatial.transform import Rotation

from c2fgrasp.data import GraspLabelSet, Quality
from c2fgrasp.geometry import GraspPose, GripperGeometry


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    return Rotation.from_quat(q / np.linalg.norm(q)).as_matrix()


def random_pose(rng: np.random.Generator, scale: float = 0.1) -> GraspPose:
    return GraspPose(random_rotation(rng), rng.uniform(-scale, scale, size=3))


def pose_enclosing(point, rotation, gripper: GripperGeometry, rng=None) -> GraspPose:
    """A pose with `rotation` whose closing region contains `point`.

    The point sits at the region center, or at a random interior position if `rng` is given.
    """
    if rng is None:
        normalized = np.full(3, 0.5)
    else:
        normalized = rng.uniform(0.05, 0.95, size=3)
    local = gripper.origin + gripper.denormalize(normalized)
    return GraspPose(rotation, np.asarray(point) - rotation @ local)


def box_surface(num_points: int, edge: float = 0.05, seed: int = 0) -> np.ndarray:
    """Uniform random points on the surface of an axis-aligned cube centered at the origin."""
    rng = np.random.default_rng(seed)
    half = 0.5 * edge
    face = rng.integers(0, 6, size=num_points)
    points = rng.uniform(-half, half, size=(num_points, 3))
    axis = face // 2
    sign = np.where(face % 2 == 0, 1.0, -1.0)
    points[np.arange(num_points), axis] = sign * half
    return points


def ellipsoid_surface(num_points: int, axes=(0.02, 0.015, 0.012), seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(num_points, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions * np.asarray(axes)


def good_set(poses) -> GraspLabelSet:
    return GraspLabelSet(poses, [Quality.GOOD] * len(poses))


