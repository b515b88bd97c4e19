"""Online classification with sparse, weighted ensembles of small trees."""
from .core import Sample, Window, one_hot
from .ensemble import (
    EnsembleConfig,
    Loss,
    ShrubEnsemble,
    ce_loss_gradient,
    ensemble_size,
    mse_loss_gradient,
)
from .errors import ConfigError, DomainError, IngestionError
from .prox import project_sparse_simplex, simplex_project
from .rng import RngHandle, derive_seed
from .shrub import Shrub, ShrubConfig, Splitter, fit_shrub, gini_impurity, node_count, predict_shrub

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "EnsembleConfig",
    "IngestionError",
    "Loss",
    "RngHandle",
    "Sample",
    "Shrub",
    "ShrubConfig",
    "ShrubEnsemble",
    "Splitter",
    "Window",
    "ce_loss_gradient",
    "derive_seed",
    "ensemble_size",
    "fit_shrub",
    "gini_impurity",
    "mse_loss_gradient",
    "node_count",
    "one_hot",
    "predict_shrub",
    "project_sparse_simplex",
    "simplex_project",
]
