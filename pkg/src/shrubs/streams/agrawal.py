"""Agrawal loan-applicant stream with five labeling functions.

Attributes, in feature order, all drawn uniformly:

    salary      [20k, 150k]
    commission  0 if salary >= 75k else [10k, 75k]
    age         [20, 80]
    elevel      {0, ..., 4}
    car         {1, ..., 20}
    zipcode     {0, ..., 8}
    hvalue      [50k, 1M]
    hyears      [1, 30]
    loan        [0, 500k]

Labeling functions (class 0 when the condition holds, else class 1):

    F1  age < 40 or age >= 60
    F2  (age < 40 and 50k <= salary <= 100k)
        or (40 <= age < 60 and 75k <= salary <= 125k)
        or (age >= 60 and 25k <= salary <= 75k)
    F3  (age < 40 and elevel in [0, 1])
        or (40 <= age < 60 and elevel in [1, 3])
        or (age >= 60 and elevel in [2, 4])
    F4  0.67 * (salary + commission) - 0.2 * loan - 20k > 0
    F5  0.67 * (salary + commission) - 5000 * elevel - 0.2 * loan - 10k > 0

F4 and F5 are the disposable-income rules numbered 7 and 9 in the original
ten-function generator. Perturbation multiplies each continuous attribute by
``1 + p * u`` with ``u`` uniform on [-1, 1), after the label is computed.
"""
from dataclasses import dataclass

import numpy as np

from ..core import Sample
from ..errors import DomainError
from ..rng import RngHandle
from .base import Generator, StreamSchema

FEATURES = (
    "salary", "commission", "age", "elevel", "car", "zipcode", "hvalue", "hyears", "loan",
)
_CONTINUOUS = (0, 1, 2, 6, 7, 8)


@dataclass(frozen=True)
class AgrawalConfig:
    function_id: int = 1
    perturbation: float = 0.0

    def __post_init__(self):
        if self.function_id not in (1, 2, 3, 4, 5):
            raise DomainError(f"function_id must be in 1..5, got {self.function_id}")
        if not 0.0 <= self.perturbation < 1.0:
            raise DomainError("perturbation must lie in [0, 1)")


def agrawal_label(function_id, salary, commission, age, elevel, loan):
    if function_id == 1:
        group_a = age < 40 or age >= 60
    elif function_id == 2:
        if age < 40:
            group_a = 50_000 <= salary <= 100_000
        elif age < 60:
            group_a = 75_000 <= salary <= 125_000
        else:
            group_a = 25_000 <= salary <= 75_000
    elif function_id == 3:
        if age < 40:
            group_a = 0 <= elevel <= 1
        elif age < 60:
            group_a = 1 <= elevel <= 3
        else:
            group_a = 2 <= elevel <= 4
    elif function_id == 4:
        group_a = 0.67 * (salary + commission) - 0.2 * loan - 20_000 > 0
    else:
        group_a = 0.67 * (salary + commission) - 5000 * elevel - 0.2 * loan - 10_000 > 0
    return 0 if group_a else 1


def agrawal_next(config, rng, t=None):
    salary = rng.uniform(20_000, 150_000)
    commission = 0.0 if salary >= 75_000 else rng.uniform(10_000, 75_000)
    age = rng.uniform(20, 80)
    elevel = rng.randbelow(5)
    car = 1 + rng.randbelow(20)
    zipcode = rng.randbelow(9)
    hvalue = rng.uniform(50_000, 1_000_000)
    hyears = rng.uniform(1, 30)
    loan = rng.uniform(0, 500_000)
    label = agrawal_label(config.function_id, salary, commission, age, elevel, loan)
    x = np.array([salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan], dtype=np.float64)
    p = config.perturbation
    if p > 0:
        for i in _CONTINUOUS:
            x[i] *= 1.0 + p * (2.0 * rng.random() - 1.0)
    return Sample(x, label)


class AgrawalGenerator(Generator):
    def __init__(self, config=AgrawalConfig(), seed=0):
        super().__init__()
        self.config = config
        self.rng = RngHandle(seed)
        self.schema = StreamSchema(len(FEATURES), 2, "agrawal")

    def _draw(self, t):
        return agrawal_next(self.config, self.rng, t)
