from .configs import (
    GRID_KEYS,
    ConfigGrid,
    config_from_params,
    config_params,
    sample_configs,
    sample_params,
)
from .harness import EvalRecord, EvalTrace, test_then_train
from .memory import estimate_memory, memory_ceiling, node_bytes, window_bytes
from .pareto import ParetoPoint, normalized_apf, pareto_front
from .sweep import StreamSpec, SweepResult, front_of, run_sweep

__all__ = [
    "GRID_KEYS",
    "ConfigGrid",
    "EvalRecord",
    "EvalTrace",
    "ParetoPoint",
    "StreamSpec",
    "SweepResult",
    "front_of",
    "config_from_params",
    "config_params",
    "estimate_memory",
    "memory_ceiling",
    "node_bytes",
    "normalized_apf",
    "pareto_front",
    "run_sweep",
    "sample_configs",
    "sample_params",
    "test_then_train",
    "window_bytes",
]
