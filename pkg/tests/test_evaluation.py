import itertools
import math

import numpy as np
import pytest

from oracles import pareto_oracle
from shrubs import ConfigError, DomainError, EnsembleConfig, ShrubConfig, ShrubEnsemble
from shrubs.evaluation import (
    ConfigGrid,
    EvalRecord,
    ParetoPoint,
    StreamSpec,
    estimate_memory,
    front_of,
    memory_ceiling,
    normalized_apf,
    pareto_front,
    run_sweep,
    sample_configs,
    sample_params,
    test_then_train as prequential,
    window_bytes,
)
from shrubs.evaluation.memory import STATE_OVERHEAD
from shrubs.streams import make_stream


class Constant:
    def __init__(self, label=0):
        self.label = label

    def predict(self, x):
        return self.label

    def step(self, x, y):
        pass


class Memorizer:
    """Perfect on anything it has been trained on, class 0 otherwise."""

    def __init__(self):
        self.seen = {}

    def predict(self, x):
        return self.seen.get(tuple(x), 0)

    def step(self, x, y):
        self.seen[tuple(x)] = y


def _stream(labels):
    return ((np.array([float(i)]), y) for i, y in enumerate(labels))


def _probe(n, seed=0):
    # the label is a function of x_t, and x_t is fresh at every item
    rng = np.random.default_rng(seed)
    for _ in range(n):
        x = rng.uniform(size=2)
        yield x, int(x[0] * 1e6) % 2


def _no_memory(model):
    return 0


def test_constant_model_perfect():
    trace = prequential(Constant(0), _stream([0] * 50), 50, 7, memory=_no_memory)
    assert [r.items_seen for r in trace.records] == [7, 14, 21, 28, 35, 42, 49, 50]
    assert all(r.cumulative_accuracy == 1.0 for r in trace.records)


def test_alternating_labels_half():
    trace = prequential(Constant(0), _stream([0, 1] * 500), 1000, 33, memory=_no_memory)
    for r in trace.records:
        assert abs(r.cumulative_accuracy - 0.5) <= 1 / (2 * r.items_seen) + 1e-15
        assert r.cumulative_accuracy == math.ceil(r.items_seen / 2) / r.items_seen


def test_prediction_precedes_training():
    trace = prequential(Memorizer(), _probe(4000), 4000, 4000, memory=_no_memory)
    assert trace.final_accuracy < 0.55
    # a fully grown ensemble would be perfect on an item it had trained on
    cfg = EnsembleConfig(n_classes=2, max_members=4, window_size=64, shrub=ShrubConfig(fully_grown=True))
    trace = prequential(ShrubEnsemble(cfg), _probe(1000, 1), 1000, 1000)
    assert trace.final_accuracy < 0.6


def test_truncated_stream_is_flagged():
    trace = prequential(Constant(0), _stream([0] * 12), 30, 5, memory=_no_memory)
    assert trace.truncated and trace.items_seen == 12
    assert [r.items_seen for r in trace.records] == [5, 10, 12]


def test_timing_optional_and_json_keys():
    r1 = prequential(Constant(0), _stream([0] * 5), 5, 5, memory=_no_memory, timing=False).records[0]
    assert r1.elapsed_seconds is None
    assert r1.to_json() == '{"items": 5, "acc": 1.0, "bytes": 0, "secs": null}'
    r2 = prequential(Constant(0), _stream([0] * 5), 5, 5, memory=_no_memory).records[0]
    assert r2.elapsed_seconds >= 0


def test_budget_stops_run():
    sizes = iter(range(100))
    trace = prequential(
        Constant(0), _stream([0] * 50), 50, 10, memory=lambda m: next(sizes), max_bytes=20
    )
    assert trace.over_budget and trace.items_seen == 22 and trace.peak_bytes == 21


def test_harness_argument_checks():
    with pytest.raises(ValueError):
        prequential(Constant(), _stream([0]), 0, 1)
    with pytest.raises(ValueError):
        prequential(Constant(), _stream([0]), 1, 0)


def test_memory_of_fresh_state():
    e = ShrubEnsemble(EnsembleConfig(n_classes=3, window_size=64), n_features=10)
    assert estimate_memory(e) == STATE_OVERHEAD


def test_memory_window_term_exact():
    cfg = EnsembleConfig(n_classes=3, window_size=64)
    e = ShrubEnsemble(cfg, n_features=10)
    rng = np.random.default_rng(0)
    for _ in range(64):
        e.window.push(rng.normal(size=10), 0)
    assert window_bytes(64, 10) == 64 * 10 * 8 + 64 * 8
    assert estimate_memory(e) == STATE_OVERHEAD + 64 * 10 * 8 + 64 * 8


def test_memory_bounds_and_monotonicity():
    cfg = EnsembleConfig(n_classes=10, max_members=4, window_size=32, step_size=0.5)
    e = ShrubEnsemble(cfg)
    stream = make_stream("led_a", seed=1, n_items=600)
    prev = estimate_memory(e)
    for t in range(600):
        e.step(*stream.next_sample())
        est = estimate_memory(e)
        assert window_bytes(len(e.window), 24) <= est <= memory_ceiling(cfg, 24)
    members = list(e.shrubs)
    sizes = [estimate_memory(e.set_members(members[:k], np.full(k, 1 / k))) for k in range(1, len(members) + 1)]
    assert sizes == sorted(sizes)
    assert prev <= estimate_memory(e)


def test_pareto_examples():
    f = pareto_front([ParetoPoint(0.9, 100), ParetoPoint(0.8, 200)])
    assert [(p.accuracy, p.size_bytes) for p in f] == [(0.9, 100)]
    f = pareto_front([ParetoPoint(0.95, 200), ParetoPoint(0.9, 100)])
    assert [(p.accuracy, p.size_bytes) for p in f] == [(0.9, 100), (0.95, 200)]
    f = pareto_front([ParetoPoint(0.9, 100, "a"), ParetoPoint(0.9, 100, "b")])
    assert len(f) == 1
    with pytest.raises(DomainError):
        pareto_front([])


def test_pareto_matches_quadratic_oracle():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(1, 60))
        # coarse grids force ties and duplicates
        pts = [
            ParetoPoint(float(rng.integers(0, 20)) / 20, int(rng.integers(1, 30)))
            for _ in range(n)
        ]
        got = [(p.accuracy, p.size_bytes) for p in pareto_front(pts)]
        assert got == pareto_oracle([(p.accuracy, p.size_bytes) for p in pts])
        again = pareto_front(pareto_front(pts))
        assert [(p.accuracy, p.size_bytes) for p in again] == got


def test_apf_examples_exact():
    assert normalized_apf([ParetoPoint(0.8, 25)], 100) == 0.8 * (1 - 0.25)
    assert normalized_apf([ParetoPoint(1.0, 100)], 100) == 0.0
    pts = [ParetoPoint(0.5, 20), ParetoPoint(0.9, 60)]
    assert normalized_apf(pts, 100) == 0.56


def test_apf_errors_and_monotonicity():
    with pytest.raises(DomainError):
        normalized_apf([], 10)
    with pytest.raises(DomainError):
        normalized_apf([ParetoPoint(0.5, 11)], 10)
    rng = np.random.default_rng(5)
    for _ in range(100):
        pts = [ParetoPoint(rng.uniform(), int(rng.integers(1, 100))) for _ in range(5)]
        base = normalized_apf(pts, 100)
        extra = ParetoPoint(rng.uniform(), int(rng.integers(1, 100)))
        if extra in pareto_front(pts + [extra]):
            assert normalized_apf(pts + [extra], 100) >= base


def test_sampler_singletons_and_determinism():
    grid = ConfigGrid({k: [v[0]] for k, v in ConfigGrid.default().values.items()})
    params = sample_params(grid, 5, seed=1)
    assert all(p == params[0] for p in params)
    full = ConfigGrid.default()
    assert sample_params(full, 20, 7) == sample_params(full, 20, 7)
    assert sample_params(full, 20, 7) != sample_params(full, 20, 8)
    cfgs = sample_configs(full, 4, seed=12, n_classes=3)
    assert [c.seed for c in cfgs] == [12, 13, 14, 15]
    assert all(c.n_classes == 3 for c in cfgs)


def test_sampler_frequencies():
    grid = ConfigGrid({"step_size": [1e-4, 1e-3, 1e-2, 1e-1, 2e-1, 5e-1]})
    n = 10_000
    counts = {}
    for p in sample_params(grid, n, seed=99):
        counts[p["step_size"]] = counts.get(p["step_size"], 0) + 1
    sigma = math.sqrt(n * (1 / 6) * (5 / 6))
    assert len(counts) == 6
    assert all(abs(c - n / 6) <= 3 * sigma for c in counts.values())


def test_grid_validation():
    with pytest.raises(DomainError):
        ConfigGrid({"M": []})
    with pytest.raises(ConfigError, match="bogus"):
        ConfigGrid({"bogus": [1]})
    with pytest.raises(DomainError):
        sample_params(ConfigGrid(), 0, 1)
    g = ConfigGrid.default().values
    assert g["M"] == [4, 8, 16, 32, 64, 128, 256]
    assert g["window_size"] == [2**i for i in range(4, 14)]
    assert g["max_depth"] == [2, 4, 8, 12, 15]


def test_sweep_parallel_matches_serial():
    grid = ConfigGrid({"M": [2, 4], "window_size": [16, 32], "max_depth": [2, 4]})
    cfgs = sample_configs(grid, 3, seed=4, n_classes=10)
    spec = StreamSpec("led_a", seed=4, n_items=300)
    serial = run_sweep(cfgs, spec, 300, 100, jobs=1)
    parallel = run_sweep(cfgs, spec, 300, 100, jobs=2)
    key = lambda r: (r.config_id, r.final_accuracy, r.avg_bytes, r.final_bytes, r.params)
    assert [key(r) for r in serial] == [key(r) for r in parallel]
    front, apf = front_of(serial)
    assert front and 0 < apf <= 1


def test_sweep_budget_drops_everything():
    cfgs = sample_configs(ConfigGrid({"window_size": [16]}), 2, seed=0, n_classes=10)
    results = run_sweep(cfgs, StreamSpec("led_a", n_items=100), 100, 50, max_bytes=100, jobs=1)
    assert all(r.dropped for r in results)
    assert front_of(results) == ([], 0.0)
