"""Parallel evaluation of many configurations on one stream."""
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..ensemble import ShrubEnsemble
from ..rng import derive_seed
from ..streams import make_stream, read_csv
from .configs import config_params
from .harness import test_then_train
from .pareto import ParetoPoint, normalized_apf, pareto_front

# key xor-ed into the run seed to seed the data generator
STREAM_SEED_KEY = 0x73747265616D


@dataclass(frozen=True)
class StreamSpec:
    """Picklable recipe for a stream: a named generator or a CSV file."""

    name: str | None = None
    seed: int = 0
    n_items: int | None = None
    drift_position: int | None = None
    drift_width: int | None = None
    csv: str | None = None
    label: str | None = None
    label_map: str = "first-seen"
    n_classes: int | None = None

    def open(self):
        if self.csv is not None:
            return read_csv(self.csv, self.label, label_map=self.label_map, n_classes=self.n_classes)
        return make_stream(
            self.name,
            derive_seed(self.seed, STREAM_SEED_KEY),
            self.n_items,
            self.drift_position,
            self.drift_width,
        )


@dataclass
class SweepResult:
    config_id: int
    params: dict
    final_accuracy: float
    avg_bytes: float
    final_bytes: int
    runtime_seconds: float
    items_seen: int
    dropped: bool
    truncated: bool


def _run_one(args):
    index, config, spec, n_items, checkpoint_every, max_bytes = args
    stream = spec.open()
    model = ShrubEnsemble(config, stream.schema.n_features)
    trace = test_then_train(
        model, stream, n_items, checkpoint_every, max_bytes=max_bytes, timing=True
    )
    return SweepResult(
        index,
        config_params(config),
        trace.final_accuracy,
        trace.avg_bytes,
        trace.final_bytes,
        trace.runtime_seconds,
        trace.items_seen,
        trace.over_budget,
        trace.truncated,
    )


def run_sweep(configs, spec, n_items, checkpoint_every=1000, max_bytes=None, jobs=None):
    """Evaluate every config on a fresh copy of the stream.

    Results come back in config order whatever the worker count. A config
    whose estimated size ever exceeds ``max_bytes`` is marked ``dropped``.
    """
    jobs = jobs or os.cpu_count() or 1
    tasks = [(i, c, spec, n_items, checkpoint_every, max_bytes) for i, c in enumerate(configs)]
    if jobs == 1 or len(tasks) <= 1:
        results = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_run_one, tasks))
    return sorted(results, key=lambda r: r.config_id)


def front_of(results):
    """Pareto front and normalized APF over the configs that were kept.

    Sizes are the per-checkpoint average (rounded up to a whole byte and at
    least 1). The APF is 0 when no config survived.
    """
    points = [
        ParetoPoint(r.final_accuracy, max(1, -int(-r.avg_bytes // 1)), str(r.config_id))
        for r in results
        if not r.dropped
    ]
    if not points:
        return [], 0.0
    biggest = max(p.size_bytes for p in points)
    return pareto_front(points), normalized_apf(points, biggest)
