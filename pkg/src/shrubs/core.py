"""Samples, one-hot labels and the FIFO sliding window."""
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import DomainError


class Sample(NamedTuple):
    """One labeled instance: a dense float feature vector and a class index."""

    x: np.ndarray
    y: int


def one_hot(label, n_classes):
    """Return the length-``n_classes`` indicator vector of ``label``."""
    if n_classes < 2:
        raise DomainError(f"need at least 2 classes, got {n_classes}")
    if not 0 <= label < n_classes:
        raise DomainError(f"label {label} outside [0, {n_classes})")
    out = np.zeros(n_classes)
    out[label] = 1.0
    return out


class Window:
    """Fixed-capacity FIFO buffer of the most recent samples.

    Storage is a ring buffer: ``push`` overwrites the oldest slot once the
    window is full and returns the slot it wrote. ``X``/``y`` views via
    :meth:`arrays` are in slot order, which differs from arrival order after
    the first wrap; use :meth:`items` for arrival order.

    The window also keeps, per feature, its occupied slots sorted by feature
    value (:meth:`sorted_slots`), updated in O(d * capacity) per push so that
    tree induction never re-sorts.
    """

    def __init__(self, capacity, n_features=None):
        if capacity < 1:
            raise DomainError(f"window capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self.n_features = n_features
        self._X = None
        self._order = None
        if n_features is not None:
            self._allocate(n_features)
        self._y = np.empty(capacity, dtype=np.int64)
        self._size = 0
        self._next = 0

    def _allocate(self, n_features):
        self.n_features = n_features
        self._X = np.empty((self.capacity, n_features))
        self._order = np.empty((n_features, self.capacity), dtype=np.int64)

    def __len__(self):
        return self._size

    @property
    def full(self):
        return self._size == self.capacity

    def push(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1:
            raise DomainError("feature vector must be one-dimensional")
        if self._X is None:
            self._allocate(x.shape[0])
        elif x.shape[0] != self.n_features:
            raise DomainError(
                f"sample has {x.shape[0]} features, window holds {self.n_features}"
            )
        slot = self._next
        _resort(self._order, self._X, x, slot, self._size, self.full)
        self._X[slot] = x
        self._y[slot] = y
        self._next = (slot + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)
        return slot

    def arrays(self):
        """``(X, y)`` views over the occupied slots, in slot order."""
        if self._X is None:
            return np.empty((0, 0)), self._y[:0]
        return self._X[: self._size], self._y[: self._size]

    def sorted_slots(self):
        """Array of shape (d, len): row f lists occupied slots by ascending x[f]."""
        if self._order is None:
            return np.empty((0, 0), dtype=np.int64)
        return self._order[:, : self._size]

    def items(self):
        """Stored samples from oldest to newest."""
        start = self._next if self.full else 0
        return [
            Sample(self._X[i].copy(), int(self._y[i]))
            for i in ((start + k) % self.capacity for k in range(self._size))
        ]


@njit(cache=True)
def _resort(order, X, x, slot, size, evict):
    d = order.shape[0]
    for f in range(d):
        row = order[f]
        n = size
        if evict:
            pos = 0
            while row[pos] != slot:
                pos += 1
            for i in range(pos, n - 1):
                row[i] = row[i + 1]
            n -= 1
        v = x[f]
        lo = 0
        hi = n
        while lo < hi:
            mid = (lo + hi) // 2
            if X[row[mid], f] <= v:
                lo = mid + 1
            else:
                hi = mid
        for i in range(n, lo, -1):
            row[i] = row[i - 1]
        row[lo] = slot
