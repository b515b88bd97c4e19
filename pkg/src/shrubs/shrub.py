"""Axis-aligned classification shrubs grown on a window of samples.

A shrub is stored as flat node arrays. Inner nodes route ``x`` to the left
child when ``x[feature] <= threshold``; leaves carry a class distribution.
Induction works on dense value ranks. Features with few distinct values are
scanned with per-node class histograms; the rest keep, for each node, a
contiguous segment of the feature's presorted index list, which splits
stably partition. A tree level costs O(d * n).
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .errors import DomainError
from .rng import xs_random, xs_randbelow

LEAF = -1


class Splitter(str, Enum):
    BEST = "train"
    RANDOM = "random"


@dataclass(frozen=True)
class ShrubConfig:
    """Growth parameters for a single shrub.

    ``max_features`` is an int, ``"all"`` or ``"sqrt"`` (rounded up); it is
    resolved against the data dimensionality at fit time. ``fully_grown``
    grows until leaves are pure or no split separates the samples, using all
    features and no depth cap, and emits one-hot majority leaves.
    """

    max_depth: int | None = None
    splitter: Splitter = Splitter.BEST
    max_features: int | str = "all"
    min_samples_split: int = 2
    fully_grown: bool = False

    def __post_init__(self):
        object.__setattr__(self, "splitter", Splitter(self.splitter))
        if self.max_depth is not None and self.max_depth < 1:
            raise DomainError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_samples_split < 2:
            raise DomainError("min_samples_split must be >= 2")
        if isinstance(self.max_features, str):
            if self.max_features not in ("all", "sqrt"):
                raise DomainError(f"unknown max_features {self.max_features!r}")
        elif self.max_features < 1:
            raise DomainError("max_features must be >= 1")

    def resolve_max_features(self, n_features):
        if self.fully_grown or self.max_features == "all":
            return n_features
        if self.max_features == "sqrt":
            return max(1, math.ceil(math.sqrt(n_features)))
        if self.max_features > n_features:
            raise DomainError(
                f"max_features={self.max_features} exceeds {n_features} features"
            )
        return int(self.max_features)


@dataclass(frozen=True, eq=False)
class Shrub:
    """A fitted tree. ``value[i]`` is meaningful only for leaves."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    support: np.ndarray
    depth: int
    n_features: int

    @property
    def n_classes(self):
        return self.value.shape[1]

    def node_count(self):
        return len(self.feature)

    def predict(self, x):
        x = self._check(np.asarray(x, dtype=np.float64), 1)
        return self.value[_leaf_of(self.feature, self.threshold, self.left, self.right, x)]

    def predict_many(self, X):
        X = self._check(np.asarray(X, dtype=np.float64), 2)
        return self.value[_leaves_of(self.feature, self.threshold, self.left, self.right, X)]

    def _check(self, x, ndim):
        if x.ndim != ndim or x.shape[-1] != self.n_features:
            raise DomainError(
                f"expected {self.n_features} features, got shape {x.shape}"
            )
        return x

    def dump(self):
        """Indented text, one node per line, children below their parent."""
        lines = []
        stack = [(0, 0)]
        while stack:
            node, depth = stack.pop()
            pad = "  " * depth
            if self.feature[node] == LEAF:
                dist = ", ".join(f"{p:.4g}" for p in self.value[node])
                lines.append(f"{pad}leaf n={self.support[node]} [{dist}]")
            else:
                lines.append(
                    f"{pad}split x[{self.feature[node]}] <= {self.threshold[node]!r}"
                )
                stack.append((self.right[node], depth + 1))
                stack.append((self.left[node], depth + 1))
        return "\n".join(lines)


def node_count(shrub):
    return shrub.node_count()


def predict_shrub(shrub, x):
    return shrub.predict(x)


def gini_impurity(class_counts):
    """``1 - sum(p_c**2)`` for the class frequencies in ``class_counts``."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 0):
        raise DomainError("class counts must be nonnegative")
    total = counts.sum()
    if total <= 0:
        raise DomainError("gini impurity undefined for an empty node")
    p = counts / total
    return float(1.0 - np.dot(p, p))


def fit_shrub(window, config, n_classes, rng):
    """Grow a shrub on ``window``.

    ``window`` is a :class:`~shrubs.core.Window`, a sequence of samples, or an
    ``(X, y)`` pair. ``rng`` is an :class:`~shrubs.rng.RngHandle` and is
    advanced by any feature subsampling or random thresholds drawn.
    """
    if hasattr(window, "sorted_slots"):
        X, y = window.arrays()
        order = window.sorted_slots() if len(y) else None
    else:
        X, y = _as_arrays(window)
        order = None
    if len(y) == 0:
        raise DomainError("cannot fit a shrub on an empty window")
    if y.min() < 0 or y.max() >= n_classes:
        raise DomainError(f"labels must lie in [0, {n_classes})")
    n, d = X.shape
    if config.fully_grown:
        max_depth = -1
        min_split = 2
    else:
        max_depth = -1 if config.max_depth is None else config.max_depth
        min_split = config.min_samples_split
    k = config.resolve_max_features(d)
    random_split = config.splitter is Splitter.RANDOM and not config.fully_grown
    X = np.ascontiguousarray(X, dtype=np.float64)
    if order is None:
        order = np.argsort(X, axis=0, kind="stable").T
    state = rng.export_state()
    arrays = _grow(
        X,
        np.ascontiguousarray(y, dtype=np.int64),
        np.ascontiguousarray(order, dtype=np.int64),
        n_classes,
        max_depth,
        random_split,
        k,
        min_split,
        config.fully_grown,
        state,
    )
    rng.import_state(state)
    feature, threshold, left, right, value, support, depth = arrays
    return Shrub(feature, threshold, left, right, value, support, int(depth), d)


def _as_arrays(window):
    if hasattr(window, "arrays"):
        return window.arrays()
    if isinstance(window, tuple) and len(window) == 2 and np.ndim(window[0]) == 2:
        return np.asarray(window[0], dtype=np.float64), np.asarray(window[1], dtype=np.int64)
    samples = list(window)
    if not samples:
        return np.empty((0, 0)), np.empty(0, dtype=np.int64)
    dims = {len(s[0]) for s in samples}
    if len(dims) != 1:
        raise DomainError("samples in a window must share one dimensionality")
    X = np.array([s[0] for s in samples], dtype=np.float64)
    y = np.array([s[1] for s in samples], dtype=np.int64)
    return X, y


@njit(cache=True)
def _leaf_of(feature, threshold, left, right, x):
    node = 0
    while feature[node] != LEAF:
        if x[feature[node]] <= threshold[node]:
            node = left[node]
        else:
            node = right[node]
    return node


@njit(cache=True)
def _leaves_of(feature, threshold, left, right, X):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in range(X.shape[0]):
        out[i] = _leaf_of(feature, threshold, left, right, X[i])
    return out


# features with at most this many distinct window values are scanned with
# per-node class histograms instead of presorted index lists
HIST_MAX_LEVELS = 16


@njit(cache=True)
def _grow(X, y, order, n_classes, max_depth, random_split, k_features, min_split, onehot, state):
    # order[f] lists sample indices sorted by feature f
    n, d = X.shape
    C = n_classes
    cap = 2 * n - 1
    feature = np.full(cap, LEAF, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, LEAF, dtype=np.int64)
    right = np.full(cap, LEAF, dtype=np.int64)
    value = np.zeros((cap, C))
    support = np.zeros(cap, dtype=np.int64)

    # dense value ranks and distinct values per feature
    rank = np.empty((n, d), dtype=np.int64)
    levels = np.empty((d, n))
    n_levels = np.empty(d, dtype=np.int64)
    for f in range(d):
        r = -1
        prev = 0.0
        for i in range(n):
            s = order[f, i]
            v = X[s, f]
            if r < 0 or v > prev:
                r += 1
                levels[f, r] = v
                prev = v
            rank[s, f] = r
        n_levels[f] = r + 1

    # presorted rows are kept only for high-cardinality features
    row_of = np.full(d, -1, dtype=np.int64)
    n_sorted = 0
    for f in range(d):
        if n_levels[f] > HIST_MAX_LEVELS:
            row_of[f] = n_sorted
            n_sorted += 1
    sorted_rows = np.empty((n_sorted, n), dtype=np.int64)
    for f in range(d):
        if row_of[f] >= 0:
            sorted_rows[row_of[f]] = order[f]
    members = np.arange(n)

    goes_left = np.zeros(n, dtype=np.int64)
    scratch = np.empty(n, dtype=np.int64)
    perm = np.arange(d)
    feats = np.empty(k_features, dtype=np.int64)
    counts = np.zeros(C, dtype=np.int64)
    cl = np.zeros(C, dtype=np.int64)
    cr = np.zeros(C, dtype=np.int64)
    hist = np.zeros((k_features, HIST_MAX_LEVELS, C), dtype=np.int64)
    hist_feats = np.empty(k_features, dtype=np.int64)

    # stack entries: node id, segment start, segment end, depth
    stack = np.empty((cap, 4), dtype=np.int64)
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    top = 1
    n_nodes = 1
    max_reached = 0

    while top > 0:
        top -= 1
        node = stack[top, 0]
        start = stack[top, 1]
        end = stack[top, 2]
        depth = stack[top, 3]
        if depth > max_reached:
            max_reached = depth
        m = end - start

        counts[:] = 0
        for i in range(start, end):
            counts[y[members[i]]] += 1
        support[node] = m
        if onehot:
            value[node, np.argmax(counts)] = 1.0
        else:
            for c in range(C):
                value[node, c] = counts[c] / m

        if m < min_split or (max_depth >= 0 and depth >= max_depth):
            continue
        pure = False
        for c in range(C):
            if counts[c] == m:
                pure = True
        if pure:
            continue

        # feature subsample for this node
        if k_features < d or random_split:
            for i in range(k_features):
                j = i + xs_randbelow(state, d - i)
                tmp = perm[i]
                perm[i] = perm[j]
                perm[j] = tmp
        feats[:] = perm[:k_features]
        if not random_split:
            feats.sort()

        best_f = -1
        best_t = 0.0
        if random_split:
            for fi in range(k_features):
                f = feats[fi]
                if row_of[f] >= 0:
                    lo = X[sorted_rows[row_of[f], start], f]
                    hi = X[sorted_rows[row_of[f], end - 1], f]
                else:
                    lo = np.inf
                    hi = -np.inf
                    for i in range(start, end):
                        v = X[members[i], f]
                        lo = min(lo, v)
                        hi = max(hi, v)
                if hi > lo:
                    t = lo + xs_random(state) * (hi - lo)
                    if t >= hi:
                        t = lo
                    best_f = f
                    best_t = t
                    break
        else:
            # one sample-major pass fills the histograms of every sampled
            # low-cardinality feature
            n_hist = 0
            for fi in range(k_features):
                f = feats[fi]
                if row_of[f] < 0:
                    hist_feats[n_hist] = f
                    hist[n_hist, : n_levels[f]] = 0
                    n_hist += 1
            if n_hist > 0:
                for i in range(start, end):
                    s = members[i]
                    c = y[s]
                    for h in range(n_hist):
                        hist[h, rank[s, hist_feats[h]], c] += 1
            best_imp = np.inf
            total_sq = 0.0
            for c in range(C):
                total_sq += counts[c] * counts[c]
            h = 0
            for fi in range(k_features):
                f = feats[fi]
                if row_of[f] >= 0:
                    row = sorted_rows[row_of[f]]
                    cl[:] = 0
                    cr[:] = counts
                    sq_l = 0.0
                    sq_r = total_sq
                    for i in range(m - 1):
                        s = row[start + i]
                        c = y[s]
                        sq_l += 2 * cl[c] + 1
                        cl[c] += 1
                        sq_r -= 2 * cr[c] - 1
                        cr[c] -= 1
                        v = X[s, f]
                        vn = X[row[start + i + 1], f]
                        if vn > v:
                            nl = i + 1
                            nr = m - nl
                            imp = (nl - sq_l / nl) + (nr - sq_r / nr)
                            if imp < best_imp:
                                best_imp = imp
                                best_f = f
                                t = 0.5 * (v + vn)
                                if t >= vn:
                                    t = v
                                best_t = t
                else:
                    cl[:] = 0
                    nl = 0
                    prev_r = -1
                    for r in range(n_levels[f]):
                        tot = 0
                        for c in range(C):
                            tot += hist[h, r, c]
                        if tot == 0:
                            continue
                        if prev_r >= 0:
                            nr = m - nl
                            sq_l = 0.0
                            sq_r = 0.0
                            for c in range(C):
                                sq_l += cl[c] * cl[c]
                                rc = counts[c] - cl[c]
                                sq_r += rc * rc
                            imp = (nl - sq_l / nl) + (nr - sq_r / nr)
                            if imp < best_imp:
                                best_imp = imp
                                best_f = f
                                v = levels[f, prev_r]
                                vn = levels[f, r]
                                t = 0.5 * (v + vn)
                                if t >= vn:
                                    t = v
                                best_t = t
                        for c in range(C):
                            cl[c] += hist[h, r, c]
                        nl += tot
                        prev_r = r
                    h += 1
        if best_f < 0:
            continue

        nl = 0
        for i in range(start, end):
            s = members[i]
            go = X[s, best_f] <= best_t
            goes_left[s] = go
            nl += go
        if nl == 0 or nl == m:
            continue

        for q in range(n_sorted + 1):
            row = members if q == n_sorted else sorted_rows[q]
            # branchless stable partition: a <= i, so row[a] is already consumed
            a = start
            b = 0
            for i in range(start, end):
                s = row[i]
                go = goes_left[s]
                row[a] = s
                scratch[b] = s
                a += go
                b += 1 - go
            for i in range(b):
                row[a + i] = scratch[i]

        lid = n_nodes
        rid = n_nodes + 1
        n_nodes += 2
        feature[node] = best_f
        threshold[node] = best_t
        left[node] = lid
        right[node] = rid
        stack[top, 0] = rid
        stack[top, 1] = start + nl
        stack[top, 2] = end
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = lid
        stack[top, 1] = start
        stack[top, 2] = start + nl
        stack[top, 3] = depth + 1
        top += 1

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
        support[:n_nodes].copy(),
        max_reached,
    )
