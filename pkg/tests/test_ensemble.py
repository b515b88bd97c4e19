import math

import numpy as np
import pytest

from oracles import ce_loss, central_difference, mse_loss
from shrubs import (
    DomainError,
    EnsembleConfig,
    RngHandle,
    Sample,
    Shrub,
    ShrubConfig,
    ShrubEnsemble,
    ce_loss_gradient,
    derive_seed,
    ensemble_size,
    fit_shrub,
    mse_loss_gradient,
    project_sparse_simplex,
)
from shrubs.ensemble import _TREE_RNG_KEY
from shrubs.shrub import LEAF
from shrubs.streams import make_stream


def leaf(dist, d=1):
    dist = np.asarray(dist, dtype=float)
    return Shrub(
        feature=np.array([LEAF]),
        threshold=np.zeros(1),
        left=np.array([LEAF]),
        right=np.array([LEAF]),
        value=dist[None, :],
        support=np.array([1]),
        depth=0,
        n_features=d,
    )


def _ens(C=2, **kw):
    return ShrubEnsemble(EnsembleConfig(n_classes=C, **kw), n_features=1)


def test_cold_start_uniform():
    e = _ens(C=4)
    np.testing.assert_array_equal(e.predict_proba([0.0]), [0.25] * 4)
    assert _ens(C=3).predict_class([0.0]) == 0
    assert ensemble_size(e) == (0, 0)


def test_weighted_vote():
    e = _ens().set_members([leaf([0, 1])], [1.0])
    np.testing.assert_array_equal(e.predict_proba([3.0]), [0, 1])
    e.set_members([leaf([1, 0]), leaf([0, 1])], [0.25, 0.75])
    np.testing.assert_allclose(e.predict_proba([3.0]), [0.25, 0.75])
    assert e.predict_class([3.0]) == 1
    e.set_members([leaf([1, 0]), leaf([0, 1])], [0.5, 0.5])
    assert e.predict_class([3.0]) == 0


def test_predict_dimension_checked():
    e = _ens()
    with pytest.raises(DomainError):
        e.predict_proba([0.0, 1.0])


def test_mse_examples():
    batch = [Sample(np.array([0.0]), 0), Sample(np.array([1.0]), 1)]
    perfect = fit_shrub(batch, ShrubConfig(), 2, RngHandle(0))
    loss, grad = mse_loss_gradient([perfect], [1.0], batch, 2)
    assert loss == 0.0 and grad.tolist() == [0.0]
    loss, grad = mse_loss_gradient([leaf([0, 1])], [1.0], [Sample(np.array([0.0]), 0)], 2)
    assert loss == pytest.approx(1.0) and grad == pytest.approx([1.0])


def test_ce_symmetric_example():
    loss, grad = ce_loss_gradient([leaf([0.5, 0.5])], [1.0], [Sample(np.array([0.0]), 1)], 2)
    assert loss == pytest.approx(math.log(2)) and grad == pytest.approx([0.0], abs=1e-15)


def test_empty_batch_rejected():
    with pytest.raises(DomainError):
        mse_loss_gradient([leaf([0, 1])], [1.0], [], 2)
    with pytest.raises(DomainError):
        mse_loss_gradient([leaf([0, 1])], [1.0, 0.0], [Sample(np.array([0.0]), 0)], 2)


def _random_instance(rng):
    C = int(rng.integers(2, 6))
    d = int(rng.integers(1, 5))
    n = int(rng.integers(1, 30))
    X = rng.normal(size=(n, d))
    y = rng.integers(0, C, size=n)
    shrubs = []
    for k in range(int(rng.integers(1, 6))):
        idx = rng.integers(0, n, size=max(1, n // 2))
        shrubs.append(
            fit_shrub((X[idx], y[idx]), ShrubConfig(max_depth=int(rng.integers(1, 4))), C, RngHandle(k))
        )
    w = rng.uniform(-1, 2, size=len(shrubs))
    H = np.stack([s.predict_many(X) for s in shrubs], axis=1)
    return shrubs, w, (X, y), H, C


@pytest.mark.parametrize(
    "fun, oracle", [(mse_loss_gradient, mse_loss), (ce_loss_gradient, ce_loss)]
)
def test_gradient_matches_central_differences(fun, oracle):
    rng = np.random.default_rng(7)
    for _ in range(100):
        shrubs, w, batch, H, C = _random_instance(rng)
        loss, grad = fun(shrubs, w, batch, C)
        assert loss == pytest.approx(oracle(H, w, batch[1], C), rel=1e-12, abs=1e-14)
        fd = central_difference(lambda v: oracle(H, v, batch[1], C), w)
        np.testing.assert_allclose(grad, fd, rtol=1e-6, atol=1e-8)


def test_ce_nonnegative():
    rng = np.random.default_rng(8)
    for _ in range(50):
        shrubs, w, batch, H, C = _random_instance(rng)
        assert ce_loss_gradient(shrubs, np.abs(w), batch, C)[0] >= 0


def test_first_step_single_member():
    e = ShrubEnsemble(EnsembleConfig(n_classes=3, window_size=5))
    e.step([0.1, 0.2], 2)
    assert len(e.shrubs) == 1 and e.weights.tolist() == [1.0]
    members, nodes = ensemble_size(e)
    assert members == 1 and nodes >= 1


def test_step_validates_sample():
    e = _ens(C=3)
    with pytest.raises(DomainError):
        e.step([0.0], 3)
    with pytest.raises(DomainError):
        e.step([0.0, 1.0], 0)


def test_config_validation():
    for bad in (
        dict(n_classes=1),
        dict(n_classes=2, max_members=0),
        dict(n_classes=2, window_size=0),
        dict(n_classes=2, step_size=0.0),
        dict(n_classes=2, train_every=0),
    ):
        with pytest.raises(DomainError):
            EnsembleConfig(**bad)


class ReferenceEnsemble:
    """Per-item update written directly from the algorithm description."""

    def __init__(self, config):
        self.c = config
        self.window = []
        self.shrubs = []
        self.w = np.zeros(0)
        self.rng = RngHandle(derive_seed(config.seed, _TREE_RNG_KEY))
        self.t = 0

    def step(self, x, y):
        c = self.c
        self.window = (self.window + [Sample(np.asarray(x, float), y)])[-c.window_size :]
        shrubs, w = list(self.shrubs), self.w
        if self.t % c.train_every == 0:
            shrubs.append(fit_shrub(self.window, c.shrub, c.n_classes, self.rng))
            w = np.append(w, 0.0)
        self.t += 1
        fun = mse_loss_gradient if c.loss.value == "mse" else ce_loss_gradient
        _, grad = fun(shrubs, w, self.window, c.n_classes)
        w = w - c.step_size * grad
        order = np.argsort(-w, kind="stable")
        w = project_sparse_simplex(w[order], c.max_members)
        keep = [i for i in range(len(w)) if w[i] != 0.0]
        self.shrubs = [shrubs[order[i]] for i in keep]
        self.w = w[keep]


@pytest.mark.parametrize(
    "kw",
    [
        dict(max_members=3, window_size=8, step_size=0.5),
        dict(max_members=5, window_size=16, step_size=2.0, loss="ce"),
        dict(max_members=2, window_size=4, step_size=5.0, train_every=3),
        dict(
            max_members=4,
            window_size=12,
            step_size=1.0,
            shrub=ShrubConfig(max_depth=3, splitter="random", max_features="sqrt"),
        ),
    ],
)
def test_matches_reference_update(kw):
    cfg = EnsembleConfig(n_classes=5, seed=3, **kw)
    ours, ref = ShrubEnsemble(cfg), ReferenceEnsemble(cfg)
    stream = make_stream("rbf_f", seed=1)
    for _ in range(300):
        x, y = stream.next_sample()
        if ref.shrubs:
            f = sum(wi * s.predict(x) for wi, s in zip(ref.w, ref.shrubs))
            np.testing.assert_allclose(ours.predict_proba(x), f, atol=1e-12)
        ours.step(x, y)
        ref.step(x, y)
        assert len(ours.shrubs) == len(ref.shrubs)
        np.testing.assert_allclose(ours.weights, ref.w, rtol=1e-9, atol=1e-12)
        for a, b in zip(ours.shrubs, ref.shrubs):
            assert np.array_equal(a.threshold, b.threshold)


def test_invariants_over_run():
    M, B = 4, 32
    cfg = EnsembleConfig(n_classes=10, max_members=M, window_size=B, step_size=0.5)
    e = ShrubEnsemble(cfg)
    stream = make_stream("led_a", seed=2, n_items=1500)
    for _ in range(1500):
        e.step(*stream.next_sample())
        assert abs(e.weights.sum() - 1) <= 1e-9
        assert np.all(e.weights > 0) and len(e.weights) == len(e.shrubs) <= M
        members, nodes = ensemble_size(e)
        assert nodes <= members * (2 * B - 1)


def test_deterministic_predictions():
    def run():
        e = ShrubEnsemble(EnsembleConfig(n_classes=2, max_members=6, window_size=50, seed=11))
        s = make_stream("agrawal_a", seed=5, n_items=800)
        preds = []
        for _ in range(800):
            x, y = s.next_sample()
            preds.append(e.predict_class(x))
            e.step(x, y)
        return preds, len(e.shrubs)

    assert run() == run()


def test_train_every_stride():
    e = ShrubEnsemble(EnsembleConfig(n_classes=2, max_members=50, window_size=8, train_every=4, step_size=50.0))
    rng = np.random.default_rng(0)
    fits = []
    for t in range(12):
        before = {id(s) for s in e.shrubs}
        e.step(rng.normal(size=2), t % 2)
        fits.append(any(id(s) not in before for s in e.shrubs))
    assert fits == [True, False, False, False] * 3


def test_set_members_validation():
    e = _ens(max_members=1)
    with pytest.raises(DomainError):
        e.set_members([leaf([1, 0]), leaf([0, 1])], [0.5, 0.5])
    with pytest.raises(DomainError):
        e.set_members([leaf([1, 0])], [0.5, 0.5])
