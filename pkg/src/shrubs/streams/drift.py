"""Concept drift by sigmoid mixing of two base streams."""
import math
from dataclasses import dataclass

from ..errors import DomainError
from ..rng import RngHandle, derive_seed
from .agrawal import AgrawalConfig, AgrawalGenerator
from .base import Generator
from .led import LedConfig, LedGenerator
from .rbf import RbfConfig, RbfGenerator

_GENERATORS = {
    LedConfig: LedGenerator,
    AgrawalConfig: AgrawalGenerator,
    RbfConfig: RbfGenerator,
}


def make_generator(config, seed):
    try:
        cls = _GENERATORS[type(config)]
    except KeyError:
        raise DomainError(f"no generator for {type(config).__name__}") from None
    return cls(config, seed)


@dataclass(frozen=True)
class DriftSpec:
    base_a: object
    base_b: object
    position: int
    width: int = 1

    def __post_init__(self):
        if self.position < 1:
            raise DomainError("drift position must be >= 1")
        if self.width < 1:
            raise DomainError("drift width must be >= 1")


def drift_probability(t, position, width):
    """Probability of drawing from the second concept at item ``t``."""
    z = -4.0 * (t - position) / width
    if z > 700:
        return 0.0
    return 1.0 / (1.0 + math.exp(z))


class DriftStream(Generator):
    """Each item comes from ``base_b`` with probability
    ``1 / (1 + exp(-4 (t - position) / width))`` and from ``base_a``
    otherwise; ``width=1`` is an abrupt switch."""

    def __init__(self, spec, seed=0):
        super().__init__()
        self.spec = spec
        self.rng = RngHandle(seed)
        self.stream_a = make_generator(spec.base_a, derive_seed(seed, 1))
        self.stream_b = make_generator(spec.base_b, derive_seed(seed, 2))
        if self.stream_a.schema.n_features != self.stream_b.schema.n_features or (
            self.stream_a.schema.n_classes != self.stream_b.schema.n_classes
        ):
            raise DomainError("drifting concepts must share a schema")
        self.schema = self.stream_a.schema

    def _draw(self, t):
        p = drift_probability(t, self.spec.position, self.spec.width)
        if self.rng.random() < p:
            return self.stream_b.next_sample()
        return self.stream_a.next_sample()

