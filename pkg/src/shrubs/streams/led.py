"""Seven-segment LED digit stream with bit-flip noise and irrelevant bits."""
from dataclasses import dataclass

import numpy as np

from ..core import Sample
from ..errors import DomainError
from ..rng import RngHandle
from .base import Generator, StreamSchema

N_SEGMENTS = 7
N_IRRELEVANT = 17
N_FEATURES = N_SEGMENTS + N_IRRELEVANT

# segment order: top, upper-left, upper-right, middle, lower-left, lower-right, bottom
SEGMENTS = np.array(
    [
        [1, 1, 1, 0, 1, 1, 1],
        [0, 0, 1, 0, 0, 1, 0],
        [1, 0, 1, 1, 1, 0, 1],
        [1, 0, 1, 1, 0, 1, 1],
        [0, 1, 1, 1, 0, 1, 0],
        [1, 1, 0, 1, 0, 1, 1],
        [1, 1, 0, 1, 1, 1, 1],
        [1, 0, 1, 0, 0, 1, 0],
        [1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 1, 0, 1, 1],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True)
class LedConfig:
    """``relevant_drift_count`` segment attributes trade places with as many
    irrelevant attributes (0 keeps the standard layout)."""

    noise_fraction: float = 0.10
    relevant_drift_count: int = 0

    def __post_init__(self):
        if not 0.0 <= self.noise_fraction < 1.0:
            raise DomainError("noise_fraction must lie in [0, 1)")
        if not 0 <= self.relevant_drift_count <= N_SEGMENTS:
            raise DomainError(f"relevant_drift_count must lie in [0, {N_SEGMENTS}]")


def _column_map(k):
    cols = np.arange(N_FEATURES)
    cols[:k], cols[N_SEGMENTS : N_SEGMENTS + k] = (
        np.arange(N_SEGMENTS, N_SEGMENTS + k),
        np.arange(k),
    )
    return cols


def led_next(config, rng, t=None):
    """Draw one LED sample: the digit, 7 noisy segment bits, 17 random bits."""
    digit = rng.randbelow(10)
    raw = np.empty(N_FEATURES)
    q = config.noise_fraction
    seg = SEGMENTS[digit]
    for i in range(N_SEGMENTS):
        bit = seg[i]
        if rng.random() < q:
            bit = 1 - bit
        raw[i] = bit
    for i in range(N_SEGMENTS, N_FEATURES):
        raw[i] = rng.randbelow(2)
    k = config.relevant_drift_count
    if k:
        raw = raw[_column_map(k)]
    return Sample(raw, digit)


class LedGenerator(Generator):
    def __init__(self, config=LedConfig(), seed=0):
        super().__init__()
        self.config = config
        self.rng = RngHandle(seed)
        self.schema = StreamSchema(N_FEATURES, 10, "led")

    def _draw(self, t):
        return led_next(self.config, self.rng, t)
