"""Shrub Ensembles: online weighted ensembles of window-trained shrubs.

Every item pushes into the sliding window, grows a new shrub on the window
with weight 0, takes one gradient step on the window loss, sorts members by
weight, projects onto the M-sparse simplex and drops members whose weight
became exactly zero.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import Window, one_hot
from .errors import DomainError
from .prox import project_sparse_simplex
from .rng import RngHandle, derive_seed
from .shrub import ShrubConfig, _leaf_of, _leaves_of, fit_shrub

# key xor-ed into the config seed for the tree-growing generator
_TREE_RNG_KEY = 0x7472656573


class Loss(str, Enum):
    MSE = "mse"
    CROSS_ENTROPY = "ce"


@dataclass(frozen=True)
class EnsembleConfig:
    n_classes: int
    max_members: int = 16
    window_size: int = 256
    step_size: float = 0.1
    loss: Loss = Loss.MSE
    shrub: ShrubConfig = field(default_factory=lambda: ShrubConfig(max_depth=8))
    train_every: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "loss", Loss(self.loss))
        if self.n_classes < 2:
            raise DomainError("n_classes must be >= 2")
        if self.max_members < 1:
            raise DomainError("max_members must be >= 1")
        if self.window_size < 1:
            raise DomainError("window_size must be >= 1")
        if not self.step_size > 0:
            raise DomainError("step_size must be > 0")
        if self.train_every < 1:
            raise DomainError("train_every must be >= 1")


def _loss_and_grad(H, w, Y, loss):
    """Window loss and its gradient in ``w``.

    ``H`` holds member predictions with shape (n, C, members); ``Y`` the
    one-hot targets, shape (n, C).
    """
    n, C = Y.shape
    flat = H.reshape(n * C, -1)
    f = (flat @ w).reshape(n, C)
    if loss is Loss.MSE:
        resid = f - Y
        value = float(np.dot(resid.ravel(), resid.ravel())) / (n * C)
        grad = (2.0 / (n * C)) * (resid.ravel() @ flat)
    else:
        z = f - f.max(axis=1, keepdims=True)
        log_p = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
        value = -float(np.sum(log_p * Y)) / n
        grad = ((np.exp(log_p) - Y).ravel() @ flat) / n
    return value, grad


def _batch_arrays(batch):
    if hasattr(batch, "arrays"):
        X, y = batch.arrays()
    elif isinstance(batch, tuple) and len(batch) == 2 and np.ndim(batch[0]) == 2:
        X, y = np.asarray(batch[0], dtype=np.float64), np.asarray(batch[1])
    else:
        samples = list(batch)
        if not samples:
            raise DomainError("loss undefined on an empty batch")
        X = np.array([s[0] for s in samples], dtype=np.float64)
        y = np.array([s[1] for s in samples])
    if len(y) == 0:
        raise DomainError("loss undefined on an empty batch")
    return X, y


def _window_loss(shrubs, weights, batch, n_classes, loss):
    X, y = _batch_arrays(batch)
    Y = np.stack([one_hot(int(label), n_classes) for label in y])
    if shrubs:
        H = np.stack([s.predict_many(X) for s in shrubs], axis=-1)
    else:
        H = np.zeros(Y.shape + (0,))
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(shrubs),):
        raise DomainError("need exactly one weight per shrub")
    return _loss_and_grad(H, w, Y, loss)


def mse_loss_gradient(shrubs, weights, batch, n_classes):
    """Mean squared error ``sum ||f(x) - y||^2 / (n C)`` and its weight gradient."""
    return _window_loss(shrubs, weights, batch, n_classes, Loss.MSE)


def ce_loss_gradient(shrubs, weights, batch, n_classes):
    """Cross-entropy of ``softmax(f(x))`` and its weight gradient."""
    return _window_loss(shrubs, weights, batch, n_classes, Loss.CROSS_ENTROPY)


class ShrubEnsemble:
    """Online Shrub Ensemble classifier.

    Parameters
    ----------
    config : EnsembleConfig
    n_features : int, optional
        Fixed from the first sample when omitted.

    Attributes
    ----------
    shrubs : list of Shrub
        Live members, sorted by decreasing weight after every step.
    weights : ndarray
        Member weights; on the simplex with at most ``max_members`` entries.
    """

    def __init__(self, config, n_features=None):
        self.config = config
        self.n_classes = config.n_classes
        self.window = Window(config.window_size, n_features)
        self.shrubs = []
        self.weights = np.zeros(0)
        self.items_seen = 0
        self.rng = RngHandle(derive_seed(config.seed, _TREE_RNG_KEY))
        # Member predictions on the window live in a fixed store of
        # max_members + 1 columns; _columns[i] is the column of shrubs[i].
        # Rows follow window slot order. Unused columns hold stale values and
        # always get weight 0.
        n_cols = config.max_members + 1
        self._store = np.zeros((config.window_size, config.n_classes, n_cols))
        self._targets = np.zeros((config.window_size, config.n_classes))
        self._columns = []
        self._cached_x = None
        self._cached_rows = None

    @property
    def n_features(self):
        return self.window.n_features

    def _check_x(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or (self.n_features is not None and x.shape[0] != self.n_features):
            raise DomainError(
                f"expected {self.n_features} features, got shape {x.shape}"
            )
        return x

    def _member_rows(self, x):
        """Member predictions on ``x``, shape (members, C)."""
        if self._cached_x is not None and np.array_equal(self._cached_x, x):
            return self._cached_rows
        rows = np.empty((len(self.shrubs), self.n_classes))
        for i, s in enumerate(self.shrubs):
            rows[i] = s.value[_leaf_of(s.feature, s.threshold, s.left, s.right, x)]
        self._cached_x = x.copy()
        self._cached_rows = rows
        return rows

    def predict_proba(self, x):
        """Weighted member vote; uniform before any member exists."""
        x = self._check_x(x)
        if not self.shrubs:
            return np.full(self.n_classes, 1.0 / self.n_classes)
        return self.weights @ self._member_rows(x)

    def predict(self, x):
        """Most probable class, lowest index on ties."""
        return int(np.argmax(self.predict_proba(x)))

    predict_class = predict

    def step(self, x, y):
        """Consume one labeled item."""
        x = self._check_x(x)
        y = int(y)
        if not 0 <= y < self.n_classes:
            raise DomainError(f"label {y} outside [0, {self.n_classes})")
        cfg = self.config
        rows = self._member_rows(x)
        slot = self.window.push(x, y)
        self._targets[slot] = 0.0
        self._targets[slot, y] = 1.0
        columns = list(self._columns)
        if columns:
            self._store[slot][:, columns] = rows.T
        shrubs = list(self.shrubs)
        w = self.weights
        n = len(self.window)
        if self.items_seen % cfg.train_every == 0:
            new = fit_shrub(self.window, cfg.shrub, self.n_classes, self.rng)
            col = min(set(range(cfg.max_members + 1)) - set(columns))
            X_win, _ = self.window.arrays()
            self._store[:n, :, col] = new.value[
                _leaves_of(new.feature, new.threshold, new.left, new.right, X_win)
            ]
            shrubs.append(new)
            columns.append(col)
            w = np.append(w, 0.0)
        self.items_seen += 1
        self._cached_x = None
        self._cached_rows = None
        if not shrubs:
            return self

        full_w = np.zeros(cfg.max_members + 1)
        full_w[columns] = w
        _, full_grad = _loss_and_grad(self._store[:n], full_w, self._targets[:n], cfg.loss)
        w = w - cfg.step_size * full_grad[columns]
        w, order = project_sparse_simplex(w, cfg.max_members, return_order=True)
        w = w[order]
        keep = [i for i in range(len(order)) if w[i] != 0.0]
        self.shrubs = [shrubs[order[i]] for i in keep]
        self._columns = [columns[order[i]] for i in keep]
        self.weights = w[keep]
        return self

    def set_members(self, shrubs, weights):
        """Replace the members, e.g. to start from a constructed ensemble.

        Cached predictions are rebuilt from the current window contents, so
        samples pushed straight into ``self.window`` are honored.
        """
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (len(shrubs),):
            raise DomainError("need exactly one weight per shrub")
        if len(shrubs) > self.config.max_members:
            raise DomainError(f"at most {self.config.max_members} members allowed")
        self.shrubs = list(shrubs)
        self.weights = w.copy()
        self._columns = list(range(len(shrubs)))
        n = len(self.window)
        if n:
            X, y = self.window.arrays()
            self._targets[:n] = 0.0
            self._targets[np.arange(n), y] = 1.0
            for col, s in enumerate(self.shrubs):
                self._store[:n, :, col] = s.predict_many(X)
        self._cached_x = None
        self._cached_rows = None
        return self

    def learn(self, sample):
        return self.step(sample[0], sample[1])

    def size(self):
        """``(members, total_nodes)`` of the live ensemble."""
        return len(self.shrubs), sum(s.node_count() for s in self.shrubs)


def ensemble_size(state):
    return state.size()
