import math
import numpy as np

from typing import Optional

from .euler import EulerAngles, euler_to_rotmat, rotmat_to_euler, canonicalize_roll
from ..typing import Vector3, Matrix3
from ..data_type import is_finite

__all__ = ['GraspPose', 'check_rotation']

_ORTHO_TOL = 1e-6
_HALF_PI = 0.5 * math.pi


def check_rotation(R: Matrix3) -> np.ndarray:
    """Validate and return `R` as a float64 rotation matrix."""
    R = np.array(R, dtype=np.float64)
    if R.shape != (3, 3):
        raise ValueError(f"Rotation matrix must have shape (3, 3), but got {R.shape}.")
    if not is_finite(R):
        raise ValueError("Rotation matrix must be finite.")
    if np.linalg.norm(R.T @ R - np.eye(3)) > _ORTHO_TOL or abs(np.linalg.det(R) - 1.0) > _ORTHO_TOL:
        raise ValueError(f"Not a proper rotation matrix:\n{R}")
    return R


class GraspPose:
    """A 6-DoF parallel-jaw grasp.

    `rotation` holds the gripper axes as columns (x = approach, y = closing,
    z = finger height) and `translation` is the gripper-frame origin in world
    coordinates. The Euler triple the pose was built from is kept alongside the
    matrix so that the text format writes back exactly what it read.
    """

    __slots__ = ('rotation', 'translation', 'confidence', '_euler')

    def __init__(self, rotation: Matrix3, translation: Vector3,
                 confidence: float = 1.0, euler: Optional[EulerAngles] = None):
        translation = np.array(translation, dtype=np.float64).reshape(-1)
        if translation.shape != (3,) or not is_finite(translation):
            raise ValueError(
                f"Translation must be a finite 3-vector, but got {translation}.")
        confidence = float(confidence)
        if not 0.0 <= confidence <= 1.0:
            raise ValueError(f"Confidence must lie in [0, 1], but got {confidence}.")

        self.rotation = check_rotation(rotation)
        self.translation = translation
        self.confidence = confidence
        self._euler = euler
        self.rotation.setflags(write=False)
        self.translation.setflags(write=False)

    @classmethod
    def from_euler(cls, e: EulerAngles, translation: Vector3,
                   confidence: float = 1.0) -> "GraspPose":
        e = EulerAngles(*map(float, e[:3]), *e[3:4])
        return cls(euler_to_rotmat(e), translation, confidence, euler=e)

    @classmethod
    def from_matrix(cls, T: np.ndarray, confidence: float = 1.0) -> "GraspPose":
        """Build a pose from a 4x4 homogeneous transform."""
        T = np.asarray(T, dtype=np.float64)
        return cls(T[:3, :3], T[:3, 3], confidence)

    @property
    def euler(self) -> EulerAngles:
        if self._euler is None:
            self._euler = rotmat_to_euler(self.rotation)
        return self._euler

    @property
    def matrix(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.rotation
        T[:3, 3] = self.translation
        return T

    def canonical(self) -> "GraspPose":
        """The gripper-equivalent pose with roll in [-pi/2, pi/2), pitch in [-pi/2, pi/2]
        and yaw in [-pi, pi)."""
        e = self.euler
        if not (-_HALF_PI <= e.r_y <= _HALF_PI and -math.pi <= e.r_z < math.pi):
            e = rotmat_to_euler(self.rotation)
        c = canonicalize_roll(e)
        if c == self.euler:
            return self
        return GraspPose.from_euler(c, self.translation, self.confidence)

    def with_confidence(self, confidence: float) -> "GraspPose":
        return GraspPose(self.rotation, self.translation, confidence, euler=self._euler)

    def transformed(self, R: Matrix3, t: Vector3) -> "GraspPose":
        """Apply the rigid transform ``x -> R x + t`` to the pose."""
        R = np.asarray(R, dtype=np.float64)
        t = np.asarray(t, dtype=np.float64)
        return GraspPose(R @ self.rotation, R @ self.translation + t, self.confidence)

    def to_local(self, points: np.ndarray) -> np.ndarray:
        """World points, shape (N, 3), expressed in the gripper frame."""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return (points - self.translation) @ self.rotation

    def to_world(self, local: np.ndarray) -> np.ndarray:
        local = np.asarray(local, dtype=np.float64).reshape(-1, 3)
        return local @ self.rotation.T + self.translation

    def __repr__(self) -> str:
        e = self.euler
        t = np.array2string(self.translation, precision=4)
        return (f"{self.__class__.__name__}(t={t}, r=({e.r_x:.4f}, {e.r_y:.4f}, {e.r_z:.4f}), "
                f"confidence={self.confidence:.4f})")
