"""Seeded xorshift64* generator shared by pure-Python code and numba kernels.

The generator is written out here rather than taken from numpy so that a seed
maps to the same draw sequence on every platform and in every port. Seeds are
scrambled with one round of splitmix64 before use, so that nearby integer seeds
give unrelated streams and seed 0 is valid.

Kernels compiled with numba receive the state as a length-1 ``uint64`` array
(see :meth:`RngHandle.export_state` / :meth:`RngHandle.import_state`) and
advance it with :func:`xs_next`, :func:`xs_random` and :func:`xs_randbelow`.
"""
import math

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_INV_2_53 = 1.0 / 9007199254740992.0


def splitmix64(x):
    """One splitmix64 output for input ``x`` (used for seeding and seed derivation)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed, key):
    """Seed for a sub-component: the base seed xor-ed with an integer key."""
    return (int(seed) ^ int(key)) & MASK64


def _initial_state(seed):
    s = splitmix64(int(seed) & MASK64)
    # xorshift has an all-zero fixed point
    return s if s != 0 else 0x9E3779B97F4A7C15


class RngHandle:
    """Deterministic random source.

    Two handles built from the same seed produce bitwise-identical sequences
    for identical call sequences.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed=0):
        self.seed = int(seed) & MASK64
        self._state = _initial_state(self.seed)

    def __repr__(self):
        return f"RngHandle(seed={self.seed}, state={self._state:#018x})"

    def next_u64(self):
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & MASK64

    def random(self):
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform(self, low, high):
        return low + (high - low) * self.random()

    def randbelow(self, n):
        """Uniform integer in [0, n), unbiased by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        reject_below = (1 << 64) % n
        while True:
            x = self.next_u64()
            if x >= reject_below:
                return x % n

    def normal(self, mean=0.0, std=1.0):
        """Gaussian draw via Box-Muller; consumes two uniforms per call."""
        u1 = 1.0 - self.random()
        u2 = self.random()
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        return mean + std * z

    def sample_indices(self, n, k):
        """``k`` distinct indices from ``range(n)`` by partial Fisher-Yates."""
        pool = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def spawn(self, key):
        """Independent handle whose seed is derived from this handle's seed and ``key``."""
        return RngHandle(derive_seed(self.seed, key))

    def export_state(self):
        """Current state as a length-1 uint64 array, for numba kernels."""
        return np.array([self._state], dtype=np.uint64)

    def import_state(self, arr):
        """Adopt the state a kernel advanced via :meth:`export_state`."""
        self._state = int(arr[0])

    def getstate(self):
        return self._state

    def setstate(self, state):
        self._state = int(state) & MASK64


@njit(cache=True)
def xs_next(state):
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return x * np.uint64(_MULT)


@njit(cache=True)
def xs_random(state):
    return np.float64(xs_next(state) >> np.uint64(11)) * _INV_2_53


@njit(cache=True)
def xs_randbelow(state, n):
    un = np.uint64(n)
    # (2**64) mod n, computed without overflow
    reject_below = (np.uint64(0) - un) % un
    while True:
        x = xs_next(state)
        if x >= reject_below:
            return np.int64(x % un)
