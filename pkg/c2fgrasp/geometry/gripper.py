import numpy as np

from dataclasses import dataclass, field
from typing import Tuple

from .pose import GraspPose
from ..typing import Vector3

__all__ = ['GripperGeometry', 'enclosed', 'enclosed_mask', 'body_mask', 'default_gripper']


@dataclass(frozen=True)
class GripperGeometry:
    """Parallel-jaw gripper dimensions in meters.

    In the gripper frame the closing region is the closed box
    ``[0, finger_depth] x [-max_width/2, max_width/2] x [-finger_height/2, finger_height/2]``
    placed at `closing_region_origin`, which lies on the x-axis. The fingers (`finger_thickness` wide) flank the
    region along y and the palm is a slab of the same thickness behind it along -x.
    """
    max_width: float = 0.0986
    finger_depth: float = 0.06
    finger_height: float = 0.02
    finger_thickness: float = 0.01
    closing_region_origin: Tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        for name in ('max_width', 'finger_depth', 'finger_height', 'finger_thickness'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"Gripper '{name}' must be strictly positive, but got {value}.")
        origin = tuple(float(v) for v in self.closing_region_origin)
        if len(origin) != 3 or not np.all(np.isfinite(origin)):
            raise ValueError(
                f"closing_region_origin must be a finite 3-vector, but got {self.closing_region_origin}.")
        if origin[1] != 0.0 or origin[2] != 0.0:
            # the two-fold roll symmetry maps the region onto itself only on the x-axis
            raise ValueError(
                f"closing_region_origin must lie on the gripper x-axis, but got {origin}.")
        object.__setattr__(self, 'closing_region_origin', origin)

    @property
    def origin(self) -> np.ndarray:
        return np.asarray(self.closing_region_origin, dtype=np.float64)

    @property
    def scale(self) -> np.ndarray:
        """Closing-region extents along the gripper x, y and z axes."""
        return np.array([self.finger_depth, self.max_width, self.finger_height])

    def region_coords(self, points: np.ndarray, pose: GraspPose) -> np.ndarray:
        """World points expressed relative to the closing-region origin of `pose`."""
        return pose.to_local(points) - self.origin

    def normalize(self, coords: np.ndarray) -> np.ndarray:
        """Closing-region coordinates mapped so that the closing box becomes [0, 1]^3."""
        coords = np.asarray(coords, dtype=np.float64)
        return coords / self.scale + np.array([0.0, 0.5, 0.5])

    def denormalize(self, normalized: np.ndarray) -> np.ndarray:
        normalized = np.asarray(normalized, dtype=np.float64)
        return (normalized - np.array([0.0, 0.5, 0.5])) * self.scale

    def in_closing_region(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.float64).reshape(-1, 3)
        half_w = 0.5 * self.max_width
        half_h = 0.5 * self.finger_height
        return ((coords[:, 0] >= 0.0) & (coords[:, 0] <= self.finger_depth)
                & (np.abs(coords[:, 1]) <= half_w)
                & (np.abs(coords[:, 2]) <= half_h))

    def in_hand(self, coords: np.ndarray) -> np.ndarray:
        """Membership of the whole hand box: palm, fingers and closing region."""
        coords = np.asarray(coords, dtype=np.float64).reshape(-1, 3)
        t = self.finger_thickness
        return ((coords[:, 0] >= -t) & (coords[:, 0] <= self.finger_depth)
                & (np.abs(coords[:, 1]) <= 0.5 * self.max_width + t)
                & (np.abs(coords[:, 2]) <= 0.5 * self.finger_height))

    def in_body(self, coords: np.ndarray) -> np.ndarray:
        """Membership of the gripper body, i.e. the hand box minus the closing region."""
        return self.in_hand(coords) & ~self.in_closing_region(coords)

    @property
    def search_radius(self) -> float:
        """Radius around a closing-region point that bounds the whole hand."""
        t = self.finger_thickness
        extent = np.array([self.finger_depth + t, self.max_width + 2 * t, self.finger_height])
        return float(np.linalg.norm(extent))


def default_gripper() -> GripperGeometry:
    return GripperGeometry()


def enclosed_mask(points: np.ndarray, pose: GraspPose, gripper: GripperGeometry) -> np.ndarray:
    """Vectorized `enclosed` over world points of shape (N, 3)."""
    return gripper.in_closing_region(gripper.region_coords(points, pose))


def enclosed(point: Vector3, pose: GraspPose, gripper: GripperGeometry) -> bool:
    """Whether `point` lies inside the closing region of the gripper at `pose`.

    The region is a closed box, so points on its faces count as enclosed.
    """
    return bool(enclosed_mask(point, pose, gripper)[0])


def body_mask(points: np.ndarray, pose: GraspPose, gripper: GripperGeometry) -> np.ndarray:
    return gripper.in_body(gripper.region_coords(points, pose))
