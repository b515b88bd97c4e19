"""Euclidean projection onto sparse probability simplices.

``project_sparse_simplex(w, M)`` keeps the ``M`` largest entries of ``w``,
zeroes the rest and projects the survivors onto the probability simplex::

    beta = max{ j <= M : w_(j) > (sum_{i<=j} w_(i) - 1) / j }
    tau  = (sum_{i<=beta} w_(i) - 1) / beta
    out  = [w - tau]_+   on the top-M entries, 0 elsewhere

where ``w_(1) >= w_(2) >= ...`` is ``w`` sorted in decreasing order with ties
kept in index order. The result is a nearest point of
``{v >= 0, sum(v) = 1, ||v||_0 <= M}``.
"""
import numpy as np

from .errors import DomainError

# An entry joins the support only if it clears the shift by more than a few
# ulps, so rounding in an already-feasible input cannot add entries worth
# ~1e-17 and projection stays idempotent.
_SLACK_ULPS = 8


def _check(w):
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise DomainError("expected a nonempty 1-d weight vector")
    if not np.all(np.isfinite(w)):
        raise DomainError("weight vector contains non-finite entries")
    return w


def project_sparse_simplex(w, M, return_order=False):
    """Nearest point of the M-sparse probability simplex.

    With ``return_order=True`` also returns the stable decreasing-order
    permutation used, so callers can reorder paired data in lockstep.
    """
    w = _check(w)
    if M < 1:
        raise DomainError(f"sparsity budget M must be >= 1, got {M}")
    order = np.argsort(-w, kind="stable")
    top = w[order[: min(M, w.size)]]
    excess = np.cumsum(top) - 1.0
    ranks = np.arange(1, top.size + 1)
    tol = _SLACK_ULPS * np.finfo(np.float64).eps * max(1.0, abs(top[0]))
    # the first entry always qualifies: w - (w - 1) = 1 > tol
    beta = np.flatnonzero(top - excess / ranks > tol)[-1] + 1
    tau = excess[beta - 1] / beta
    out = np.zeros_like(w)
    # exact arithmetic gives w_(j) <= tau past beta; enforce it
    out[order[:beta]] = np.maximum(top[:beta] - tau, 0.0)
    if return_order:
        return out, order
    return out


def simplex_project(v):
    """Projection onto the full probability simplex."""
    v = _check(v)
    return project_sparse_simplex(v, v.size)
