"""Alpha-energies of Seidel spectra and the graph-level claim checkers."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .graph_core import Graph
from .spectral import Spectrum, seidel_spectrum

DEFAULT_ALPHA_GRID: tuple[float, ...] = tuple(round(0.1 * k, 1) for k in range(1, 20))
IDENTITY_RTOL = 1e-9
MARGIN_TOL = 1e-9
PRODUCT_RTOL = 1e-8
ALPHA_CUTOFF = 1e-6


class NoFailingAlphaFound(UserWarning):
    """The product test says a failing alpha exists but bisection hit the cutoff."""


def alpha_grid(values=None) -> tuple[float, ...]:
    """Validate an alpha grid: nonempty, sorted, every value strictly inside (0, 2)."""
    if values is None:
        return DEFAULT_ALPHA_GRID
    grid = tuple(sorted(float(a) for a in values))
    if not grid:
        raise ValueError("alpha grid must be nonempty")
    if grid[0] <= 0 or grid[-1] >= 2:
        raise ValueError("alpha grid values must lie strictly inside (0, 2)")
    return grid


def _abs_values(s) -> np.ndarray:
    vals = s.values if isinstance(s, Spectrum) else s
    return np.abs(np.asarray(vals, dtype=float))


def alpha_energy(s, alpha: float) -> float:
    """Sum of |theta|**alpha; zero eigenvalues contribute nothing."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return float(np.sum(_abs_values(s) ** float(alpha)))


def alpha_energies(abs_values: np.ndarray, grid) -> np.ndarray:
    """Vectorized alpha-energies: ``(..., n)`` absolute values -> ``(..., len(grid))``."""
    a = np.asarray(abs_values, dtype=float)[..., None] ** np.asarray(grid, dtype=float)
    return a.sum(axis=-2)


def alpha_bound(n: int, alpha) -> np.ndarray | float:
    """Right-hand side (n-1)**alpha + (n-1)."""
    return (n - 1) ** np.asarray(alpha, dtype=float) + (n - 1)


def seidel_energy(g: Graph) -> float:
    return alpha_energy(seidel_spectrum(g), 1.0)


@dataclass(frozen=True)
class TraceReport:
    """Trace identities of a Seidel spectrum with their slacks.

    ``slack_*`` are signed: (i) is |sum theta^2 - n(n-1)|, (ii) and (iii) are
    bound minus value (nonnegative when the bound holds).
    """

    n: int
    sum_sq: float
    sum_fourth: float
    max_sq: float
    slack_sq: float
    slack_fourth: float
    slack_max: float
    ok_sq: bool
    ok_fourth: bool
    ok_max: bool

    @property
    def ok(self) -> bool:
        return self.ok_sq and self.ok_fourth and self.ok_max


def trace_identities(s, n: int) -> TraceReport:
    vals = _abs_values(s)
    sq = vals * vals
    sum_sq = float(np.sum(sq))
    sum_fourth = float(np.sum(sq * sq))
    max_sq = float(sq.max(initial=0.0))
    slack_sq = abs(sum_sq - n * (n - 1))
    slack_fourth = (n - 1) ** 4 + n - 1 - sum_fourth
    slack_max = (n - 1) ** 2 - max_sq
    return TraceReport(
        n, sum_sq, sum_fourth, max_sq, slack_sq, slack_fourth, slack_max,
        slack_sq <= IDENTITY_RTOL * n * n,
        slack_fourth >= -IDENTITY_RTOL * n ** 4,
        slack_max >= -IDENTITY_RTOL * n * n,
    )


def check_trace_identities(g: Graph) -> TraceReport:
    return trace_identities(seidel_spectrum(g), g.n)


@dataclass(frozen=True)
class TheoremReport:
    n: int
    det_exact: int
    gate_holds: bool
    alphas: tuple[float, ...]
    margins: tuple[float, ...]
    energy: float
    haemers_margin: float

    @property
    def min_margin(self) -> float:
        return min(self.margins)

    @property
    def violated(self) -> bool:
        """Gate holds but some alpha-margin is below tolerance."""
        return self.gate_holds and self.min_margin < -MARGIN_TOL * self.n


def gate_holds(det: int, n: int) -> bool:
    """Exact integer test |det S| >= n - 1."""
    return abs(int(det)) >= n - 1


def check_theorem_forward(g: Graph, grid=None) -> TheoremReport:
    grid = alpha_grid(grid)
    spec = seidel_spectrum(g)
    det = spec.meta["det"]
    vals = _abs_values(spec)
    margins = alpha_energies(vals, grid) - alpha_bound(g.n, grid)
    energy = float(np.sum(vals))
    return TheoremReport(
        g.n, det, gate_holds(det, g.n), grid,
        tuple(float(m) for m in margins), energy, energy - (2 * g.n - 2),
    )


def product_below_gate(s, n: int) -> bool:
    """|prod theta| < n - 1 with relative tolerance ``PRODUCT_RTOL``."""
    prod = abs(float(np.prod(_abs_values(s))))
    return prod < (n - 1) * (1.0 - PRODUCT_RTOL)


def find_failing_alpha(s, n: int) -> float | None:
    """An alpha in (0, 2) where the alpha-energy drops below (n-1)**alpha + n - 1.

    Returns None when |prod theta| >= n - 1.  Otherwise alpha is halved from 1
    until the inequality fails; if that never happens above the cutoff,
    returns None and emits :class:`NoFailingAlphaFound`.
    """
    vals = _abs_values(s)
    if len(vals) != n:
        raise ValueError(f"spectrum has {len(vals)} values, expected {n}")
    if not product_below_gate(vals, n):
        return None
    alpha = 1.0
    while alpha >= ALPHA_CUTOFF:
        if float(np.sum(vals ** alpha)) < float(alpha_bound(n, alpha)):
            return alpha
        alpha /= 2.0
    warnings.warn(
        f"no failing alpha found down to {ALPHA_CUTOFF:g}; |prod theta| is within "
        f"the cutoff resolution of n-1", NoFailingAlphaFound, stacklevel=2)
    return None


def limit_check(s, alpha_small: float) -> float:
    """Relative gap between the alpha power mean and the geometric mean of |theta|."""
    if not 0 < alpha_small <= 0.01:
        raise ValueError("alpha_small must lie in (0, 0.01]")
    vals = _abs_values(s)
    if np.any(vals == 0):
        raise ValueError("limit identity degenerates with a zero eigenvalue")
    logs = np.log(vals)
    # log of the power mean, computed via expm1/log1p to keep precision at small alpha
    log_pm = math.log1p(float(np.mean(np.expm1(alpha_small * logs)))) / alpha_small
    log_gm = float(np.mean(logs))
    return abs(math.expm1(log_pm - log_gm))
