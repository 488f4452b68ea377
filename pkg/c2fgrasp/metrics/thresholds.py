import math

from dataclasses import dataclass

__all__ = ['MatchThresholds', 'HARD', 'EASY']


@dataclass(frozen=True)
class MatchThresholds:
    """Strict upper bounds for a prediction to match a ground truth.

    `rot_tol` bounds the angle of the relative rotation, after the gripper's
    half-turn symmetry is taken into account.
    """
    trans_tol: float = 0.02
    rot_tol: float = math.radians(5.0)

    def __post_init__(self):
        for name in ('trans_tol', 'rot_tol'):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"MatchThresholds '{name}' must be strictly positive, but got {value}.")
            object.__setattr__(self, name, value)


HARD = MatchThresholds(0.02, math.radians(5.0))
EASY = MatchThresholds(0.02, math.radians(10.0))
