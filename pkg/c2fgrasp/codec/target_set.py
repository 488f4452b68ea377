import numpy as np

from typing import Dict, Optional, Sequence, TextIO

from ..data.volume import C2FVolume, stack_volumes, CONF
from ..typing import CellIndex

__all__ = ['TargetSet']


class TargetSet:
    """Target volumes together with the positive cell set S.

    `positives` is sorted as `(point_index, i, j)` and `assignments` maps each
    positive to the index of the ground-truth grasp it was encoded from. Sets
    rebuilt from files alone carry no assignments.
    """

    def __init__(self, volumes: Sequence[C2FVolume], positives: Sequence[CellIndex],
                 assignments: Optional[Dict[CellIndex, int]] = None):
        self.volumes = list(volumes)
        self.positives = sorted(tuple(int(v) for v in cell) for cell in positives)
        if len(set(self.positives)) != len(self.positives):
            raise ValueError("Positive cells must be unique.")
        if assignments is not None:
            missing = [cell for cell in self.positives if cell not in assignments]
            if missing:
                raise ValueError(f"Positive cell {missing[0]} has no assigned grasp.")
            assignments = {cell: int(assignments[cell]) for cell in self.positives}
        self.assignments = assignments
        if self.volumes:
            stack_volumes(self.volumes)
        for k, i, j in self.positives:
            if not (0 <= k < len(self.volumes)):
                raise ValueError(f"Positive cell ({k}, {i}, {j}) refers to a missing volume.")
            n_y, n_z = self.volumes[k].n_y, self.volumes[k].n_z
            if not (0 <= i < n_y and 0 <= j < n_z):
                raise ValueError(f"Positive cell ({k}, {i}, {j}) is outside the grid.")

    @classmethod
    def from_volumes(cls, volumes: Sequence[C2FVolume], threshold: float = 0.5) -> "TargetSet":
        """Rebuild S from target confidences, a cell is positive iff confidence >= `threshold`."""
        volumes = list(volumes)
        if not volumes:
            return cls([], [])
        _, cells = stack_volumes(volumes)
        positives = [tuple(cell) for cell in np.argwhere(cells[..., CONF] >= threshold)]
        return cls(volumes, positives)

    def __len__(self) -> int:
        return len(self.positives)

    @property
    def num_points(self) -> int:
        return len(self.volumes)

    def positive_mask(self) -> np.ndarray:
        """Boolean mask of shape (K, n_y, n_z) marking S."""
        if not self.volumes:
            return np.zeros((0, 0, 0), dtype=bool)
        k, (n_y, n_z) = len(self.volumes), self.volumes[0].shape[:2]
        mask = np.zeros((k, n_y, n_z), dtype=bool)
        if self.positives:
            index = np.asarray(self.positives)
            mask[index[:, 0], index[:, 1], index[:, 2]] = True
        return mask

    def write_positives(self, f: TextIO) -> None:
        """Write S as `point_index i j [grasp_index]` lines."""
        f.write("# point_index i j grasp_index\n")
        for cell in self.positives:
            line = " ".join(str(v) for v in cell)
            if self.assignments is not None:
                line = f"{line} {self.assignments[cell]}"
            f.write(line + "\n")

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(num_points={self.num_points}, num_positives={len(self)})"
