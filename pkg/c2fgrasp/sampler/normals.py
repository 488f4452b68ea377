import logging
import numpy as np

from typing import Optional
from sklearn.neighbors import NearestNeighbors

from ..data.point_cloud import PointCloud
from ..typing import Vector3

__all__ = ['estimate_normals', 'orient_normals']

logger = logging.getLogger(__name__)

# relative eigenvalue below which a neighborhood is treated as rank deficient
_RANK_TOL = 1e-10


def orient_normals(points: np.ndarray, normals: np.ndarray,
                   viewpoint: Optional[Vector3] = None) -> np.ndarray:
    """Flip normals toward `viewpoint`, or away from the centroid if it is None."""
    if viewpoint is None:
        direction = points - points.mean(axis=0)
    else:
        direction = np.asarray(viewpoint, dtype=np.float64).reshape(1, 3) - points
    flip = np.einsum('ij,ij->i', normals, direction) < 0
    return np.where(flip[:, None], -normals, normals)


def estimate_normals(cloud: PointCloud, k: int = 30,
                     viewpoint: Optional[Vector3] = None) -> PointCloud:
    """Estimate unit normals from the covariance of the `k` nearest neighbors.

    The normal of a point is the eigenvector of the smallest eigenvalue of its
    neighborhood covariance. A neighborhood whose covariance has rank < 2 (all
    neighbors collinear or coincident) gets its normal flagged invalid.

    Parameters:
    ----------
    cloud: input cloud with at least `k` points.
    k: neighborhood size, the point itself included.
    viewpoint: normals are flipped to face it; if None they face away from the
        cloud centroid, which suits complete object clouds.

    Returns:
    ----------
    A `PointCloud` sharing the points of `cloud`, with normals and validity mask.

    Raises:
    ----------
    ValueError: if the cloud has fewer than `k` points.
    """
    k = int(k)
    n = len(cloud)
    if k < 1:
        raise ValueError(f"k must be a positive integer, but got {k}.")
    if n < k:
        raise ValueError(f"Normal estimation needs at least k={k} points, but the cloud has {n}.")
    points = cloud.points

    # exact tree search keeps the neighborhoods deterministic
    index = NearestNeighbors(n_neighbors=k, algorithm='kd_tree').fit(points)
    _, neighbors = index.kneighbors(points)
    local = points[neighbors]
    local = local - local.mean(axis=1, keepdims=True)
    cov = np.einsum('nki,nkj->nij', local, local) / k
    eigvals, eigvecs = np.linalg.eigh(cov)
    normals = eigvecs[:, :, 0]

    scale = np.maximum(eigvals[:, 2], np.finfo(np.float64).tiny)
    valid = (eigvals[:, 2] > 0) & (eigvals[:, 1] > _RANK_TOL * scale)
    normals = orient_normals(points, normals, viewpoint)
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    if not valid.all():
        logger.info(f"{int((~valid).sum())} of {n} normal(s) come from degenerate neighborhoods.")
    return cloud.with_normals(normals, valid)
