"""Random radial-basis-function stream with optionally moving centroids."""
from dataclasses import dataclass

import numpy as np

from ..core import Sample
from ..errors import DomainError
from ..rng import RngHandle
from .base import Generator, StreamSchema


@dataclass(frozen=True)
class RbfConfig:
    """Centroid layout and motion.

    ``max_stddev`` bounds the per-centroid spread, drawn uniformly from
    ``[0, max_stddev]``. ``min_separation`` > 0 places centers by rejection so
    that every pair is at least that far apart.
    """

    centroid_count: int = 50
    n_features: int = 10
    n_classes: int = 5
    drift_speed: float = 0.0
    max_stddev: float = 0.1
    min_separation: float = 0.0

    def __post_init__(self):
        if self.n_features < 1 or self.n_classes < 2:
            raise DomainError("need n_features >= 1 and n_classes >= 2")
        if self.centroid_count < self.n_classes:
            raise DomainError("centroid_count must be >= n_classes")
        if self.drift_speed < 0 or self.max_stddev < 0 or self.min_separation < 0:
            raise DomainError("drift_speed, max_stddev and min_separation must be >= 0")


class RbfGenerator(Generator):
    """Samples a uniformly chosen centroid plus Gaussian noise.

    Centroid ``i`` has class ``i mod C``. After each emitted sample every
    centroid moves ``drift_speed`` along its own unit direction, reflecting
    off the faces of the unit cube.
    """

    _MAX_PLACEMENT_TRIES = 100_000

    def __init__(self, config=RbfConfig(), seed=0):
        super().__init__()
        self.config = config
        self.rng = RngHandle(seed)
        d = config.n_features
        self.schema = StreamSchema(d, config.n_classes, "rbf")
        self.centers = self._place_centers()
        self.labels = np.arange(config.centroid_count) % config.n_classes
        self.stddevs = np.array(
            [self.rng.uniform(0.0, config.max_stddev) for _ in range(config.centroid_count)]
        )
        dirs = np.array(
            [[self.rng.normal() for _ in range(d)] for _ in range(config.centroid_count)]
        )
        self.directions = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        self.initial_centers = self.centers.copy()

    def _place_centers(self):
        cfg = self.config
        centers = []
        tries = 0
        while len(centers) < cfg.centroid_count:
            c = np.array([self.rng.random() for _ in range(cfg.n_features)])
            tries += 1
            if tries > self._MAX_PLACEMENT_TRIES:
                raise DomainError("could not place centroids at the requested separation")
            if cfg.min_separation > 0 and any(
                np.linalg.norm(c - o) < cfg.min_separation for o in centers
            ):
                continue
            centers.append(c)
        return np.array(centers)

    def _draw(self, t):
        cfg = self.config
        i = self.rng.randbelow(cfg.centroid_count)
        sd = self.stddevs[i]
        x = self.centers[i].copy()
        if sd > 0:
            x += sd * np.array([self.rng.normal() for _ in range(cfg.n_features)])
        if cfg.drift_speed > 0:
            self._move()
        return Sample(x, int(self.labels[i]))

    def _move(self):
        c = self.centers + self.config.drift_speed * self.directions
        low = c < 0
        high = c > 1
        c[low] = -c[low]
        c[high] = 2.0 - c[high]
        self.directions[low | high] *= -1.0
        self.centers = c

