"""Named stream presets addressable from the command line.

=========  ==============================================================
name       definition
=========  ==============================================================
led_a      LED, 10% noise; abrupt drift to 3 swapped segment attributes
led_g      as led_a with a gradual drift of width 50 000
agrawal_a  Agrawal F1 -> F4, 5% perturbation, abrupt drift
agrawal_g  as agrawal_a with a gradual drift of width 50 000
rbf_f      RBF, 50 centroids, d=10, C=5, centroids move 1e-3 per item
rbf_m      as rbf_f, centroids move 1e-4 per item
=========  ==============================================================

Drift position defaults to the middle of the requested item count (or item
500 000 when no count is given).
"""
from ..errors import DomainError
from .agrawal import AgrawalConfig
from .drift import DriftSpec, DriftStream, make_generator
from .led import LedConfig
from .rbf import RbfConfig

GRADUAL_WIDTH = 50_000
DEFAULT_POSITION = 500_000
LED_DRIFT_ATTRIBUTES = 3
AGRAWAL_PERTURBATION = 0.05

_DRIFTING = {
    "led_a": (LedConfig(0.10, 0), LedConfig(0.10, LED_DRIFT_ATTRIBUTES), 1),
    "led_g": (LedConfig(0.10, 0), LedConfig(0.10, LED_DRIFT_ATTRIBUTES), GRADUAL_WIDTH),
    "agrawal_a": (AgrawalConfig(1, AGRAWAL_PERTURBATION), AgrawalConfig(4, AGRAWAL_PERTURBATION), 1),
    "agrawal_g": (
        AgrawalConfig(1, AGRAWAL_PERTURBATION),
        AgrawalConfig(4, AGRAWAL_PERTURBATION),
        GRADUAL_WIDTH,
    ),
}
_MOVING = {
    "rbf_f": RbfConfig(50, 10, 5, drift_speed=1e-3),
    "rbf_m": RbfConfig(50, 10, 5, drift_speed=1e-4),
}

STREAM_NAMES = tuple(_DRIFTING) + tuple(_MOVING)


def make_stream(name, seed=0, n_items=None, drift_position=None, drift_width=None):
    """Build the named generator."""
    if name in _MOVING:
        return make_generator(_MOVING[name], seed)
    if name not in _DRIFTING:
        raise DomainError(f"unknown stream {name!r}; choose from {', '.join(STREAM_NAMES)}")
    base_a, base_b, width = _DRIFTING[name]
    if drift_position is None:
        drift_position = max(1, n_items // 2) if n_items else DEFAULT_POSITION
    if drift_width is not None:
        width = drift_width
    return DriftStream(DriftSpec(base_a, base_b, drift_position, width), seed)
