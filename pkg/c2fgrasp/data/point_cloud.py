import numpy as np

from typing import Optional

from ..typing import Matrix3, Vector3
from ..data_type import is_finite

__all__ = ['PointCloud']

_UNIT_TOL = 1e-6


class PointCloud:
    """Points (N, 3) in meters, with optional unit normals (N, 3).

    `valid` marks the normals that came from a well-conditioned neighborhood;
    points whose normal is invalid are never used as sampling seeds.
    """

    def __init__(self, points: np.ndarray, normals: Optional[np.ndarray] = None,
                 valid: Optional[np.ndarray] = None):
        points = np.array(points, dtype=np.float64).reshape(-1, 3)
        if not is_finite(points):
            raise ValueError("Point coordinates must be finite.")
        if normals is not None:
            normals = np.array(normals, dtype=np.float64).reshape(-1, 3)
            if normals.shape != points.shape:
                raise ValueError(
                    f"Expected {points.shape[0]} normals, but got {normals.shape[0]}.")
            if not is_finite(normals):
                raise ValueError("Normals must be finite.")
            lengths = np.linalg.norm(normals, axis=1)
            if valid is None:
                valid = np.ones(points.shape[0], dtype=bool)
            valid = np.asarray(valid, dtype=bool).reshape(-1)
            if valid.shape[0] != points.shape[0]:
                raise ValueError("Validity mask must have one entry per point.")
            if np.any(np.abs(lengths[valid] - 1.0) > _UNIT_TOL):
                raise ValueError("Normals must have unit length.")
        elif valid is not None:
            raise ValueError("A validity mask needs normals.")

        self.points = points
        self.normals = normals
        self.valid = valid

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def has_normals(self) -> bool:
        return self.normals is not None

    def with_normals(self, normals: np.ndarray, valid: Optional[np.ndarray] = None) -> "PointCloud":
        return PointCloud(self.points, normals, valid)

    def transformed(self, R: Matrix3, t: Vector3) -> "PointCloud":
        """Apply the rigid transform ``x -> R x + t`` to points and normals."""
        R = np.asarray(R, dtype=np.float64)
        t = np.asarray(t, dtype=np.float64)
        normals = None if self.normals is None else self.normals @ R.T
        return PointCloud(self.points @ R.T + t, normals, self.valid)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(num_points={len(self)}, normals={self.has_normals})"
