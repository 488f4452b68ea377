import logging
import math
import numpy as np

from typing import List, Optional, Sequence, Tuple

from .quantize import decode_angles
from ..data.volume import C2FVolume, stack_volumes, CONF, DX, DY, DZ, DRY, DRZ, COS, SIN
from ..errors import DegenerateRollError
from ..geometry.euler import EulerAngles, euler_to_rotmat, wrap_angle
from ..geometry.gripper import GripperGeometry, default_gripper
from ..geometry.pose import GraspPose
from ..transforms import Transform

__all__ = ['roll_from_pair', 'decode_cell', 'decode_volume', 'DecodeVolume']

logger = logging.getLogger(__name__)

_HALF_PI = 0.5 * math.pi


def roll_from_pair(theta_cos: float, theta_sin: float) -> float:
    """Recover roll from its doubled-angle pair, in [-pi/2, pi/2).

    The pair is normalized first, so raw network outputs are accepted.

    Raises:
    ----------
    DegenerateRollError: if the pair is zero (or not finite).
    """
    norm = math.hypot(theta_cos, theta_sin)
    if not math.isfinite(norm) or norm == 0.0:
        raise DegenerateRollError(
            f"Roll pair (theta_cos={theta_cos}, theta_sin={theta_sin}) is degenerate.")
    r_x = 0.5 * math.atan2(theta_sin / norm, theta_cos / norm)
    if r_x >= _HALF_PI:
        r_x -= math.pi
    return r_x


def _cell_euler(values: np.ndarray, i: int, j: int, n_y: int, n_z: int) -> EulerAngles:
    r_x = roll_from_pair(float(values[COS]), float(values[SIN]))
    r_y, r_z = decode_angles(i, j, float(values[DRY]), float(values[DRZ]), n_y, n_z)
    return EulerAngles(r_x, r_y, wrap_angle(r_z))


def _decode_values(grasp_point: np.ndarray, values: np.ndarray, i: int, j: int,
                   n_y: int, n_z: int, gripper: GripperGeometry) -> GraspPose:
    e = _cell_euler(values, i, j, n_y, n_z)
    R = euler_to_rotmat(e)
    local = gripper.origin + gripper.denormalize(values[[DX, DY, DZ]].astype(np.float64))
    translation = grasp_point - R @ local
    confidence = min(1.0, max(0.0, float(values[CONF])))
    return GraspPose(R, translation, confidence, euler=e)


def decode_cell(volume: C2FVolume, i: int, j: int,
                gripper: Optional[GripperGeometry] = None) -> GraspPose:
    """Decode cell `(i, j)` of `volume` into a world-frame grasp pose.

    The grasp point sits at the denormalized `(dx, dy, dz)` offset from the
    closing-region origin in the gripper frame, which fixes the gripper origin
    once the rotation is known.

    Raises:
    ----------
    ValueError: if `(i, j)` is outside the grid.
    DegenerateRollError: if the cell's roll pair is zero.
    """
    gripper = gripper or default_gripper()
    n_y, n_z = volume.n_y, volume.n_z
    if not (0 <= i < n_y and 0 <= j < n_z):
        raise ValueError(f"Cell ({i}, {j}) is outside the ({n_y}, {n_z}) grid.")
    return _decode_values(volume.grasp_point, volume.cells[i, j], int(i), int(j),
                          n_y, n_z, gripper)


def decode_volume(volumes: Sequence[C2FVolume], gripper: Optional[GripperGeometry] = None,
                  conf_threshold: float = 0.5,
                  return_skipped: bool = False):
    """Decode every cell whose confidence reaches `conf_threshold`.

    Poses come back sorted by confidence, highest first; equal confidences keep
    `(point_index, i, j)` order. Cells with a degenerate roll pair are skipped and
    counted.

    Parameters:
    ----------
    volumes: predicted volumes, all of the same grid shape.
    gripper: gripper dimensions, the default gripper if None.
    conf_threshold: in [0, 1].
    return_skipped: also return the number of skipped degenerate cells.

    Returns:
    ----------
    A list of `GraspPose`, or `(poses, num_skipped)` when `return_skipped`.
    """
    conf_threshold = float(conf_threshold)
    if not 0.0 <= conf_threshold <= 1.0:
        raise ValueError(f"conf_threshold must lie in [0, 1], but got {conf_threshold}.")
    gripper = gripper or default_gripper()
    volumes = list(volumes)
    if not volumes:
        return ([], 0) if return_skipped else []

    points, cells = stack_volumes(volumes)
    n_y, n_z = cells.shape[1:3]
    # argwhere yields (k, i, j) in lexicographic order
    candidates = np.argwhere(cells[..., CONF] >= conf_threshold)
    poses: List[Tuple[float, GraspPose]] = []
    skipped = 0
    for k, i, j in candidates:
        try:
            pose = _decode_values(points[k], cells[k, i, j], int(i), int(j), n_y, n_z, gripper)
        except DegenerateRollError:
            skipped += 1
            continue
        poses.append((-float(cells[k, i, j, CONF]), pose))
    if skipped:
        logger.warning(f"Skipped {skipped} cell(s) with a degenerate roll pair.")
    poses.sort(key=lambda item: item[0])
    poses = [pose for _, pose in poses]
    logger.debug(f"Decoded {len(poses)} pose(s) from {len(volumes)} volume(s).")
    if return_skipped:
        return poses, skipped
    return poses


class DecodeVolume(Transform):

    def __init__(self, gripper: Optional[GripperGeometry] = None, conf_threshold: float = 0.5):
        super().__init__()
        self.gripper = gripper or default_gripper()
        self.conf_threshold = conf_threshold

    def __call__(self, volumes: Sequence[C2FVolume]) -> List[GraspPose]:
        return decode_volume(volumes, self.gripper, self.conf_threshold)

    def extra_repr(self) -> str:
        return f"conf_threshold={self.conf_threshold}"
