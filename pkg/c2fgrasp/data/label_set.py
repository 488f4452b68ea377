from enum import Enum
from typing import List, Sequence

from ..geometry.pose import GraspPose

__all__ = ['Quality', 'GraspLabelSet']


class Quality(str, Enum):
    GOOD = 'good'
    BAD = 'bad'

    @classmethod
    def parse(cls, token: str) -> "Quality":
        """Exact match on the lowercase value, `good` or `bad`."""
        try:
            return cls(str(token))
        except ValueError:
            raise ValueError(
                f"Unknown grasp quality: '{token}', expected one of {[q.value for q in cls]}.") from None


class GraspLabelSet:
    """Ground-truth grasps of one scene or object with good/bad labels."""

    def __init__(self, grasps: Sequence[GraspPose], labels: Sequence, source: str = ""):
        grasps = list(grasps)
        labels = [label if isinstance(label, Quality) else Quality.parse(label) for label in labels]
        if len(grasps) != len(labels):
            raise ValueError(
                f"Got {len(grasps)} grasps but {len(labels)} labels.")
        self.grasps = grasps
        self.labels = labels
        self.source = str(source)

    def __len__(self) -> int:
        return len(self.grasps)

    def __iter__(self):
        return iter(zip(self.grasps, self.labels))

    @property
    def good_indices(self) -> List[int]:
        return [ix for ix, label in enumerate(self.labels) if label is Quality.GOOD]

    def good(self) -> List[GraspPose]:
        return [self.grasps[ix] for ix in self.good_indices]

    @property
    def num_good(self) -> int:
        return len(self.good_indices)

    @property
    def num_bad(self) -> int:
        return len(self) - self.num_good

    def __repr__(self) -> str:
        return (f"{self.__class__.__name__}(source='{self.source}', good={self.num_good}, "
                f"bad={self.num_bad})")
