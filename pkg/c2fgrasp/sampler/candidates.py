import logging
import math
import numpy as np

from numba import njit
from typing import List, Optional, Tuple
from sklearn.neighbors import NearestNeighbors

from .sampler_config import SamplerConfig
from ..data.point_cloud import PointCloud
from ..geometry.euler import rot_x
from ..geometry.gripper import GripperGeometry, body_mask, default_gripper
from ..geometry.pose import GraspPose
from ..utils.progress import progress

__all__ = ['sample_candidates', 'collides', 'seed_indices', 'local_frame']

logger = logging.getLogger(__name__)

_PARALLEL_TOL = 1e-9
# eigenvalue gap, relative to the largest, below which a principal axis is undetermined
_DEGENERATE_TOL = 1e-9


@njit(cache=True)
def _hand_counts(rel, rotations, offsets, depth, half_w, half_h, thickness):
    """Enclosed-point counts and collision flags of C hand placements.

    `rel` holds points relative to the seed (M, 3); placement c maps them to
    closing-region coordinates ``rel @ rotations[c] + (offsets[c], 0, 0)``.
    """
    num_candidates = rotations.shape[0]
    num_points = rel.shape[0]
    enclosed = np.zeros(num_candidates, dtype=np.int64)
    collide = np.zeros(num_candidates, dtype=np.bool_)
    for c in range(num_candidates):
        R = rotations[c]
        for m in range(num_points):
            px, py, pz = rel[m, 0], rel[m, 1], rel[m, 2]
            z = px * R[0, 2] + py * R[1, 2] + pz * R[2, 2]
            if abs(z) > half_h:
                continue
            x = px * R[0, 0] + py * R[1, 0] + pz * R[2, 0] + offsets[c]
            if x < -thickness or x > depth:
                continue
            y = abs(px * R[0, 1] + py * R[1, 1] + pz * R[2, 1])
            if y > half_w + thickness:
                continue
            if x >= 0.0 and y <= half_w:
                enclosed[c] += 1
            else:
                collide[c] = True
                break
    return enclosed, collide


def collides(pose: GraspPose, cloud: PointCloud, gripper: Optional[GripperGeometry] = None) -> bool:
    """Whether any cloud point lies in the gripper body (fingers or palm).

    Points inside the closing region do not count.
    """
    gripper = gripper or default_gripper()
    if len(cloud) == 0:
        return False
    return bool(body_mask(cloud.points, pose, gripper).any())


def _tangent_axis(normal: np.ndarray, neighbor_points: np.ndarray) -> Optional[np.ndarray]:
    """Major in-plane axis of the neighbor points, None if the spread has no preferred direction."""
    if neighbor_points.shape[0] < 2:
        return None
    centered = neighbor_points - neighbor_points.mean(axis=0)
    projector = np.eye(3) - np.outer(normal, normal)
    tangent = centered @ projector
    eigvals, eigvecs = np.linalg.eigh(tangent.T @ tangent)
    if eigvals[2] <= 0.0 or eigvals[2] - eigvals[1] <= _DEGENERATE_TOL * eigvals[2]:
        return None
    return eigvecs[:, 2]


def local_frame(normal: np.ndarray, neighbor_normals: np.ndarray,
                neighbor_points: np.ndarray) -> Optional[np.ndarray]:
    """Gripper rotation at a surface point before any roll.

    The approach axis points into the surface (against `normal`). The closing
    axis follows the principal curvature direction, the cross product of the
    minor principal axis of the neighbor normals with the normal. Where the
    normals do not single out that axis (a flat patch) the closing axis is the
    major in-plane axis of the neighbor points instead. Both only depend on the
    neighborhood, so the frame moves rigidly with the cloud.

    Returns None when neither the normals nor the points give a direction.
    """
    normal = np.asarray(normal, dtype=np.float64)
    approach = -normal
    M = neighbor_normals.T @ neighbor_normals
    eigvals, eigvecs = np.linalg.eigh(M)
    closing = None
    if eigvals[1] - eigvals[0] > _DEGENERATE_TOL * eigvals[2]:
        closing = np.cross(eigvecs[:, 0], normal)
        if np.linalg.norm(closing) < _PARALLEL_TOL:
            closing = None
    if closing is None:
        axis = _tangent_axis(normal, neighbor_points)
        if axis is None:
            return None
        closing = axis - (axis @ normal) * normal
    closing /= np.linalg.norm(closing)
    height = np.cross(approach, closing)
    return np.column_stack([approach, closing, height])


def seed_indices(cloud: PointCloud, cfg: SamplerConfig) -> np.ndarray:
    """Seeded uniform choice, without replacement, among points with a valid normal."""
    candidates = np.flatnonzero(cloud.valid)
    size = min(cfg.num_seed_points, candidates.size)
    rng = np.random.default_rng(cfg.rng_seed)
    return rng.choice(candidates, size=size, replace=False)


def _placements(cfg: SamplerConfig, gripper: GripperGeometry) -> Tuple[np.ndarray, np.ndarray]:
    """Roll rotations (roll_steps, 3, 3) and approach offsets (depth_steps,)."""
    rolls = np.stack([rot_x(m * math.pi / cfg.roll_steps) for m in range(cfg.roll_steps)])
    depths = gripper.finger_depth * np.arange(1, cfg.depth_steps + 1) / (cfg.depth_steps + 1)
    return rolls, depths


def sample_candidates(cloud: PointCloud, gripper: Optional[GripperGeometry] = None,
                      cfg: Optional[SamplerConfig] = None,
                      verbose: bool = False) -> List[GraspPose]:
    """Enumerate collision-free grasp candidates around seeded surface points.

    At every seed the local frame is rolled `roll_steps` times about the normal
    and pushed to `depth_steps` offsets so that the seed sits inside the closing
    region. A placement is kept when its closing region holds at least
    `min_contact_points` points and its body holds none. Output follows seed
    order, then roll, then depth.

    Raises:
    ----------
    ValueError: if the cloud has no normals.
    """
    gripper = gripper or default_gripper()
    cfg = cfg or SamplerConfig()
    if not cloud.has_normals:
        raise ValueError("Candidate sampling needs a cloud with normals.")
    if len(cloud) == 0:
        return []

    points, normals = cloud.points, cloud.normals
    seeds = seed_indices(cloud, cfg)
    if seeds.size == 0:
        logger.warning("No point has a valid normal, no candidates sampled.")
        return []
    rolls, depths = _placements(cfg, gripper)
    offsets = np.tile(depths, cfg.roll_steps)
    origin = gripper.origin
    half_w, half_h = 0.5 * gripper.max_width, 0.5 * gripper.finger_height

    k = min(cfg.neighbors_k, len(cloud))
    index = NearestNeighbors(algorithm='kd_tree').fit(points)
    _, frame_neighbors = index.kneighbors(points[seeds], n_neighbors=k)
    balls = index.radius_neighbors(points[seeds], radius=gripper.search_radius,
                                   return_distance=False)

    grasps = []
    for ix, seed in enumerate(progress(seeds, verbose=verbose, desc='Sampling grasps')):
        nbrs = frame_neighbors[ix]
        base = local_frame(normals[seed], normals[nbrs][cloud.valid[nbrs]], points[nbrs])
        if base is None:
            logger.debug(f"Seed {seed} has no usable local frame, skipped.")
            continue
        frames = base @ rolls
        # one rotation per (roll, depth) placement
        rotations = np.repeat(frames, cfg.depth_steps, axis=0)
        rel = points[balls[ix]] - points[seed]
        enclosed, collide = _hand_counts(rel, rotations, offsets, gripper.finger_depth,
                                         half_w, half_h, gripper.finger_thickness)
        keep = np.flatnonzero((enclosed >= cfg.min_contact_points) & ~collide)
        for c in keep:
            local = origin + np.array([offsets[c], 0.0, 0.0])
            translation = points[seed] - rotations[c] @ local
            grasps.append(GraspPose(rotations[c], translation))
    logger.info(f"Sampled {len(grasps)} collision-free candidate(s) from {seeds.size} seed(s).")
    return grasps
