"""Random hyperparameter configurations over a finite grid."""
from dataclasses import dataclass, field

from ..ensemble import EnsembleConfig, Loss
from ..errors import ConfigError, DomainError
from ..rng import RngHandle
from ..shrub import ShrubConfig

# Sampling order is part of the reproducibility contract.
GRID_KEYS = ("M", "window_size", "step_size", "max_depth", "splitter", "max_features", "loss")


def _default_grid():
    return {
        "M": [4, 8, 16, 32, 64, 128, 256],
        "window_size": [2**i for i in range(4, 14)],
        "step_size": [1e-4, 1e-3, 1e-2, 1e-1, 2e-1, 5e-1],
        "max_depth": [2, 4, 8, 12, 15],
        "splitter": ["train", "random"],
        "max_features": ["all", "sqrt"],
    }


@dataclass
class ConfigGrid:
    """Parameter name -> admissible values.

    Keys are ``M``, ``window_size``, ``step_size``, ``max_depth``,
    ``splitter``, ``max_features`` and optionally ``loss``. ``max_features``
    takes ``"all"`` (d), ``"sqrt"`` or a feature count.
    """

    values: dict = field(default_factory=_default_grid)

    def __post_init__(self):
        unknown = sorted(set(self.values) - set(GRID_KEYS))
        if unknown:
            raise ConfigError(f"unknown grid key {unknown[0]!r}", key=unknown[0])
        for key, vals in self.values.items():
            if not isinstance(vals, (list, tuple)):
                raise ConfigError(f"grid entry {key!r} must be a list", key=key)
            if len(vals) == 0:
                raise DomainError(f"grid entry {key!r} has no values")

    @classmethod
    def default(cls):
        return cls(_default_grid())


def config_from_params(params, n_classes, seed=0):
    """Build an :class:`EnsembleConfig` from a flat grid-style dict."""
    shrub = ShrubConfig(
        max_depth=params.get("max_depth", 8),
        splitter=params.get("splitter", "train"),
        max_features=params.get("max_features", "all"),
    )
    return EnsembleConfig(
        n_classes=n_classes,
        max_members=params.get("M", 16),
        window_size=params.get("window_size", 256),
        step_size=params.get("step_size", 0.1),
        loss=Loss(params.get("loss", "mse")),
        shrub=shrub,
        seed=seed,
    )


def config_params(config):
    """Inverse of :func:`config_from_params` for reporting."""
    return {
        "M": config.max_members,
        "window_size": config.window_size,
        "step_size": config.step_size,
        "max_depth": config.shrub.max_depth,
        "splitter": config.shrub.splitter.value,
        "max_features": config.shrub.max_features,
        "loss": config.loss.value,
    }


def sample_params(grid, n, seed):
    """``n`` dicts with one uniform draw per grid key, in ``GRID_KEYS`` order."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = RngHandle(seed)
    keys = [k for k in GRID_KEYS if k in grid.values]
    out = []
    for _ in range(n):
        out.append({k: grid.values[k][rng.randbelow(len(grid.values[k]))] for k in keys})
    return out


def sample_configs(grid, n, seed, n_classes=2, base_seed=None):
    """Sample ``n`` ensemble configurations.

    Config ``i`` gets model seed ``base_seed ^ i`` (``base_seed`` defaults to
    ``seed``). Duplicates are allowed.
    """
    base = seed if base_seed is None else base_seed
    return [
        config_from_params(p, n_classes, seed=base ^ i)
        for i, p in enumerate(sample_params(grid, n, seed))
    ]
