import math

from dataclasses import dataclass

__all__ = ['SamplerConfig']


@dataclass(frozen=True)
class SamplerConfig:
    """Parameters of the geometric grasp sampler."""
    neighbors_k: int = 30
    num_seed_points: int = 500
    # rotations about the surface normal, spread over a half turn
    roll_steps: int = 8
    # approach offsets inside the closing region
    depth_steps: int = 5
    friction_mu: float = 0.3
    min_contact_points: int = 5
    rng_seed: int = 0
    # meters; contact band next to each finger for the antipodal test
    contact_tolerance: float = 0.002

    def __post_init__(self):
        for name in ('neighbors_k', 'num_seed_points', 'roll_steps', 'depth_steps', 'min_contact_points'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"SamplerConfig '{name}' must be a positive integer, but got {value}.")
            object.__setattr__(self, name, int(value))
        for name in ('friction_mu', 'contact_tolerance'):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"SamplerConfig '{name}' must be strictly positive, but got {value}.")
            object.__setattr__(self, name, value)
        object.__setattr__(self, 'rng_seed', int(self.rng_seed))

    @property
    def cone_cos(self) -> float:
        """Cosine of the friction cone half-angle, ``cos(arctan(mu))``."""
        return math.cos(math.atan(self.friction_mu))
