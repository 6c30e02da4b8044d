"""The power-sum minimization problem over squared Seidel spectra.

Minimize ``f(x) = sum x_i**p`` (0 < p < 1) subject to

    g(x)   = sum x_i - n(n-1)                  = 0
    h(x)   = sum x_i**2 - (n-1)**4 - (n-1)     <= 0
    d(x)   = (n-1)**2 - prod x_i               <= 0
    k_i(x) = x_i - (n-1)**2                    <= 0
    l_i(x) = xi - x_i                          <= 0

Squared Seidel eigenvalues of a graph with |det S| >= n-1 satisfy all of
them, and ``f`` then equals the alpha-energy with ``alpha = 2p``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..energy import product_below_gate
from ..spectral import Spectrum

FEAS_RTOL = 1e-9


class GateError(ValueError):
    """Spectrum fails the determinant gate, so it is not a feasible point."""


@dataclass(frozen=True)
class PowerSumProblem:
    n: int
    p: float
    xi: float

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        if not 0 < self.p < 1:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not 0 < self.xi < self.xi_limit:
            raise ValueError(f"xi must lie in (0, {self.xi_limit:.3g}), got {self.xi}")

    @property
    def upper(self) -> float:
        """Box upper bound (n-1)**2."""
        return float((self.n - 1) ** 2)

    @property
    def total(self) -> float:
        return float(self.n * (self.n - 1))

    @property
    def quad_bound(self) -> float:
        return float((self.n - 1) ** 4 + self.n - 1)

    @property
    def xi_limit(self) -> float:
        """Largest admissible xi: (n-1)**(4-2n)."""
        return float((self.n - 1) ** (4.0 - 2.0 * self.n))

    def optimum_value(self) -> float:
        """Known global minimum (n-1)**(2p) + n - 1."""
        return (self.n - 1) ** (2 * self.p) + self.n - 1

    def optimum_point(self) -> np.ndarray:
        x = np.ones(self.n)
        x[0] = self.upper
        return x

    def uniform_point(self) -> np.ndarray:
        return np.full(self.n, float(self.n - 1))

    def objective(self, x) -> float:
        return float(np.sum(np.asarray(x, dtype=float) ** self.p))

    def objective_grad(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.p * x ** (self.p - 1.0)


def make_problem(n: int, p: float) -> PowerSumProblem:
    """Problem instance with xi set to half its admissible maximum."""
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    return PowerSumProblem(n, float(p), 0.5 * float(n - 1) ** (4.0 - 2.0 * n))


@dataclass(frozen=True)
class ConstraintValues:
    """Constraint values at a point; inequalities are satisfied when <= 0."""

    g: float
    h: float
    d: float
    k: np.ndarray
    l: np.ndarray
    scales: dict

    def violations(self) -> dict[str, float]:
        """Scaled violation of each constraint family (0 when satisfied)."""
        s = self.scales
        return {
            "g": abs(self.g) / s["g"],
            "h": max(self.h, 0.0) / s["h"],
            "d": max(self.d, 0.0) / s["d"],
            "k": max(float(self.k.max()), 0.0) / s["k"],
            "l": max(float(self.l.max()), 0.0) / s["l"],
        }

    def max_violation(self) -> float:
        return max(self.violations().values())

    def feasible(self, rtol: float = FEAS_RTOL) -> bool:
        return self.max_violation() <= rtol

    def as_vector(self) -> np.ndarray:
        """Flat slack vector (g, h, d, k_1..k_n, l_1..l_n)."""
        return np.concatenate([[self.g, self.h, self.d], self.k, self.l])


def constraint_scales(prob: PowerSumProblem, x: np.ndarray) -> dict:
    # each family is measured relative to the magnitude of its terms
    return {
        "g": prob.total,
        "h": prob.quad_bound,
        "d": max(prob.upper, float(np.prod(x))),
        "k": prob.upper,
        "l": max(prob.xi, float(np.max(x))) if len(x) else 1.0,
    }


def evaluate_constraints(prob: PowerSumProblem, x) -> ConstraintValues:
    x = np.asarray(x, dtype=float)
    if x.shape != (prob.n,):
        raise ValueError(f"point has shape {x.shape}, expected ({prob.n},)")
    return ConstraintValues(
        g=float(np.sum(x) - prob.total),
        h=float(np.sum(x * x) - prob.quad_bound),
        d=float(prob.upper - np.prod(x)),
        k=x - prob.upper,
        l=prob.xi - x,
        scales=constraint_scales(prob, x),
    )


def embed_spectrum(s, alpha: float) -> tuple[PowerSumProblem, np.ndarray]:
    """Map a gated Seidel spectrum to the point theta**2 of problem (n, alpha/2)."""
    vals = np.asarray(s.values if isinstance(s, Spectrum) else s, dtype=float)
    n = len(vals)
    if not 0 < alpha < 2:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")
    if product_below_gate(vals, n):
        raise GateError(f"|prod theta| = {abs(np.prod(vals)):.6g} < n-1 = {n - 1}; embedding refused")
    prob = make_problem(n, alpha / 2.0)
    return prob, vals * vals
