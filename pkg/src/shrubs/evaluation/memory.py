"""Analytical model-size accounting.

The estimate counts what a compact implementation must store, so numbers are
platform-independent:

* window: ``len(window) * (d * FEATURE_BYTES + LABEL_BYTES)``
* each shrub: ``node_count * node_bytes(C) + MEMBER_OVERHEAD``, where a node
  holds a feature index, a threshold, two child indices, a support count and
  a length-C float64 distribution: ``node_bytes(C) = 40 + 8 * C``
* weights: ``WEIGHT_BYTES`` per member
* ``STATE_OVERHEAD`` for the configuration scalars and counters
"""
FEATURE_BYTES = 8
LABEL_BYTES = 8
WEIGHT_BYTES = 8
MEMBER_OVERHEAD = 16
STATE_OVERHEAD = 64


def node_bytes(n_classes):
    return 40 + 8 * n_classes


def window_bytes(n_items, n_features):
    return n_items * (n_features * FEATURE_BYTES + LABEL_BYTES)


def estimate_memory(model):
    """Estimated size in bytes of a :class:`~shrubs.ensemble.ShrubEnsemble`."""
    d = model.n_features or 0
    total = STATE_OVERHEAD + window_bytes(len(model.window), d)
    per_node = node_bytes(model.n_classes)
    for shrub in model.shrubs:
        total += shrub.node_count() * per_node + MEMBER_OVERHEAD + WEIGHT_BYTES
    return total


def memory_ceiling(config, n_features):
    """Largest value :func:`estimate_memory` can take between steps."""
    M, B = config.max_members, config.window_size
    return (
        STATE_OVERHEAD
        + window_bytes(B, n_features)
        + M * ((2 * B - 1) * node_bytes(config.n_classes) + MEMBER_OVERHEAD + WEIGHT_BYTES)
    )
