"""Two-point weighted power-sum comparison and a premise sampler for fuzzing it.

For positive weights ``al, be, nu, om`` and points ``a, b, c, d`` with equal
total weight, equal weighted sums, ``max(a, b) <= max(c, d)`` and
``a**al * b**be >= c**nu * d**om``, the claim under test is

    al * a**p + be * b**p >= nu * c**p + om * d**p     for 0 <= p <= 1.
"""

from __future__ import annotations

import math
import random
from typing import NamedTuple, Sequence

PREMISE_TOL = 1e-10
CONCLUSION_TOL = 1e-10
DEFAULT_P_GRID = tuple(k / 20 for k in range(21))


class PremiseError(ValueError):
    pass


class WeightPremiseError(PremiseError):
    """al + be != nu + om."""


class LinearPremiseError(PremiseError):
    """al*a + be*b != nu*c + om*d."""


class MaxPremiseError(PremiseError):
    """max(a, b) > max(c, d)."""


class ProductPremiseError(PremiseError):
    """a**al * b**be < c**nu * d**om."""


class RejectionBudgetExceeded(RuntimeError):
    pass


class BennettTuple(NamedTuple):
    al: float
    be: float
    nu: float
    om: float
    a: float
    b: float
    c: float
    d: float


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= PREMISE_TOL * max(1.0, abs(x), abs(y))


def check_premises(al, be, nu, om, a, b, c, d) -> None:
    """Raise the matching :class:`PremiseError` subclass for the first failed premise."""
    if min(al, be, nu, om, a, b, c, d) <= 0:
        raise PremiseError("all weights and points must be positive")
    if not _close(al + be, nu + om):
        raise WeightPremiseError(f"weights differ: {al + be} vs {nu + om}")
    if not _close(al * a + be * b, nu * c + om * d):
        raise LinearPremiseError(f"weighted sums differ: {al * a + be * b} vs {nu * c + om * d}")
    if max(a, b) > max(c, d) * (1 + PREMISE_TOL):
        raise MaxPremiseError(f"max(a, b) = {max(a, b)} exceeds max(c, d) = {max(c, d)}")
    lhs = al * math.log(a) + be * math.log(b)
    rhs = nu * math.log(c) + om * math.log(d)
    if lhs < rhs - PREMISE_TOL * max(1.0, abs(lhs), abs(rhs)):
        raise ProductPremiseError(f"log products: {lhs} < {rhs}")


def bennett_check(al, be, nu, om, a, b, c, d, p_grid: Sequence[float] = DEFAULT_P_GRID) -> bool:
    """True iff the weighted p-power comparison holds at every p in ``p_grid``."""
    check_premises(al, be, nu, om, a, b, c, d)
    for p in p_grid:
        if not 0 <= p <= 1:
            raise ValueError(f"p = {p} outside [0, 1]")
        left = al * a ** p + be * b ** p
        right = nu * c ** p + om * d ** p
        if left < right - CONCLUSION_TOL:
            return False
    return True


def sample_bennett_premises(seed: int, budget: int = 10_000) -> BennettTuple:
    """Rejection-sample a tuple satisfying all four premises; deterministic per seed."""
    rng = random.Random(seed)
    for _ in range(budget):
        d = math.exp(rng.uniform(math.log(0.01), math.log(10.0)))
        c = d * math.exp(rng.uniform(0.01, math.log(100.0)))
        nu = rng.uniform(0.1, 5.0)
        om = rng.uniform(0.1, 5.0)
        al = rng.uniform(0.05, 0.95) * (nu + om)
        be = nu + om - al
        a = rng.uniform(d, c)
        b = (nu * c + om * d - al * a) / be
        if not (b > 0 and max(a, b) <= c):
            continue
        if al * math.log(a) + be * math.log(b) < nu * math.log(c) + om * math.log(d):
            continue
        return BennettTuple(al, be, nu, om, a, b, c, d)
    raise RejectionBudgetExceeded(f"no admissible tuple in {budget} draws for seed {seed}")
