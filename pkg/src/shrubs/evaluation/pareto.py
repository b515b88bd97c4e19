"""Accuracy/size Pareto fronts and their normalized area."""
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError


@dataclass(frozen=True)
class ParetoPoint:
    accuracy: float
    size_bytes: int
    config_id: str = ""


def _dominates(q, p):
    return (
        q.accuracy >= p.accuracy
        and q.size_bytes <= p.size_bytes
        and (q.accuracy > p.accuracy or q.size_bytes < p.size_bytes)
    )


def pareto_front(points):
    """Non-dominated points, smallest first; exact duplicates kept once.

    Sorting by size ascending, then accuracy descending, a point survives iff
    its accuracy beats every smaller-or-equal model before it.
    """
    points = list(points)
    if not points:
        raise DomainError("pareto front of an empty set")
    ordered = sorted(points, key=lambda p: (p.size_bytes, -p.accuracy))
    front = []
    best = None
    for p in ordered:
        if best is None or p.accuracy > best.accuracy:
            front.append(p)
            best = p
    return front


def normalized_apf(points, max_size_bytes):
    """Area under the best-accuracy-within-budget step function on [0, 1].

    Sizes are divided by ``max_size_bytes``. The accuracy achievable with a
    normalized budget ``s`` is the best accuracy among front points no larger
    than ``s``, and 0 below the smallest one. The integral is summed exactly
    in rationals and rounded once.
    """
    points = list(points)
    if not points:
        raise DomainError("APF of an empty set")
    if max_size_bytes <= 0:
        raise DomainError("max_size_bytes must be positive")
    for p in points:
        if p.size_bytes > max_size_bytes:
            raise DomainError(
                f"point of {p.size_bytes} bytes exceeds max size {max_size_bytes}"
            )
    front = pareto_front(points)
    scale = Fraction(max_size_bytes)
    edges = [Fraction(p.size_bytes) / scale for p in front] + [Fraction(1)]
    area = Fraction(0)
    for p, lo, hi in zip(front, edges, edges[1:]):
        area += Fraction(p.accuracy) * (hi - lo)
    return float(area)
