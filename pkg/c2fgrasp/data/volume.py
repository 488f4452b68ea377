import numpy as np

from typing import NamedTuple, Optional, Sequence, List, Tuple

from .. import config
from ..typing import Vector3

__all__ = [
    'C2FCell', 'C2FVolume', 'stack_volumes', 'unstack_volumes', 'NUM_CHANNELS',
    'CONF', 'DX', 'DY', 'DZ', 'DRY', 'DRZ', 'COS', 'SIN'
]

# channel layout of one cell
CONF, DX, DY, DZ, DRY, DRZ, COS, SIN = range(8)
NUM_CHANNELS = 8


class C2FCell(NamedTuple):
    confidence: float
    dx: float
    dy: float
    dz: float
    d_ry: float
    d_rz: float
    theta_cos: float
    theta_sin: float


class C2FVolume:
    """The `(n_y, n_z, 8)` coarse-to-fine grid predicted (or targeted) at one grasp point."""

    def __init__(self, grasp_point: Vector3, cells: np.ndarray):
        grasp_point = np.array(grasp_point, dtype=np.float64).reshape(-1)
        if grasp_point.shape != (3,):
            raise ValueError(f"Grasp point must be a 3-vector, but got {grasp_point}.")
        cells = np.array(cells, dtype=config.floatx())
        if cells.ndim != 3 or cells.shape[2] != NUM_CHANNELS or min(cells.shape[:2]) < 1:
            raise ValueError(
                f"Volume cells must have shape (n_y, n_z, {NUM_CHANNELS}), but got {cells.shape}.")
        self.grasp_point = grasp_point
        self.cells = cells

    @classmethod
    def zeros(cls, grasp_point: Vector3, n_y: Optional[int] = None,
              n_z: Optional[int] = None) -> "C2FVolume":
        default_y, default_z = config.grid_shape()
        n_y = default_y if n_y is None else n_y
        n_z = default_z if n_z is None else n_z
        return cls(grasp_point, np.zeros((n_y, n_z, NUM_CHANNELS)))

    @property
    def n_y(self) -> int:
        return self.cells.shape[0]

    @property
    def n_z(self) -> int:
        return self.cells.shape[1]

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.cells.shape

    def set_cell(self, i: int, j: int, cell: Sequence[float]) -> None:
        self.cells[i, j] = cell

    def flatten(self) -> np.ndarray:
        """All cell values, ``n_y * n_z * 8`` of them (4800 for the default grid)."""
        return self.cells.reshape(-1)

    def copy(self) -> "C2FVolume":
        return C2FVolume(self.grasp_point.copy(), self.cells.copy())

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(grasp_point={self.grasp_point}, shape={self.shape})"


def stack_volumes(volumes: Sequence[C2FVolume]) -> Tuple[np.ndarray, np.ndarray]:
    """Stack volumes into grasp points (K, 3) and cells (K, n_y, n_z, 8)."""
    volumes = list(volumes)
    if not volumes:
        raise ValueError("Need at least one volume.")
    shape = volumes[0].shape
    for ix, volume in enumerate(volumes):
        if volume.shape != shape:
            raise ValueError(
                f"Volume shapes don't agree: the first is {shape}, but the {ix}-th is {volume.shape}.")
    points = np.stack([volume.grasp_point for volume in volumes])
    cells = np.stack([volume.cells for volume in volumes])
    return points, cells


def unstack_volumes(points: np.ndarray, cells: np.ndarray) -> List[C2FVolume]:
    """Split stacked arrays back into volumes, copying into float64 points and `floatx` cells."""
    return [C2FVolume(p, c) for p, c in zip(points, cells)]
