import math

from dataclasses import dataclass, fields

__all__ = ['LossConfig']


@dataclass(frozen=True)
class LossConfig:
    """Focal loss constants and the weights of the combined loss."""
    alpha: float = 0.25
    gamma: float = 2.0
    lambda_x: float = 1.0
    lambda_y: float = 1.0
    lambda_z: float = 1.0
    lambda_cls: float = 1.0
    lambda_rot: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"LossConfig '{f.name}' must be finite and non-negative, but got {value}.")
            object.__setattr__(self, f.name, value)
        if self.alpha <= 0:
            raise ValueError(f"LossConfig 'alpha' must be strictly positive, but got {self.alpha}.")
