"""Multi-start augmented-Lagrangian solver for :class:`PowerSumProblem`.

The box ``[xi, (n-1)**2]`` and the sum constraint are kept exactly by
Euclidean projection onto their intersection; the quadratic and product
bounds get the usual inequality-augmented terms.  Internally the product
bound is used in log form, ``2 log(n-1) - sum log x_i <= 0``, which has the
same feasible set and far better scaling than the raw product.  Inner
problems are solved by spectral projected gradient with a nonmonotone
Armijo search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .problem import PowerSumProblem, evaluate_constraints

log = logging.getLogger(__name__)

DEFAULT_STARTS = 32
DEFAULT_SEED = 0
CLUSTER_RTOL = 1e-4


class NoFeasiblePointError(RuntimeError):
    pass


@dataclass
class LocalResult:
    x: np.ndarray
    value: float
    outer_iterations: int
    inner_iterations: int
    converged: bool
    start_index: int = -1
    multipliers: dict = field(default_factory=dict)


class _Scaled:
    """Objective and inequality constraints normalised to O(1) magnitudes."""

    def __init__(self, prob: PowerSumProblem):
        self.prob = prob
        self.f_scale = prob.n * prob.upper ** prob.p
        self.h_scale = prob.quad_bound
        self.log_target = 2.0 * np.log(prob.n - 1)
        self.d_scale = max(1.0, self.log_target)

    def f(self, x):
        return np.sum(x ** self.prob.p) / self.f_scale

    def df(self, x):
        return self.prob.p * x ** (self.prob.p - 1.0) / self.f_scale

    def ineq(self, x):
        return np.array([
            (np.dot(x, x) - self.prob.quad_bound) / self.h_scale,
            (self.log_target - np.sum(np.log(x))) / self.d_scale,
        ])

    def dineq(self, x):
        return np.stack([2.0 * x / self.h_scale, -1.0 / (x * self.d_scale)])


def project_capped_simplex(y: np.ndarray, lo: float, hi: float, total: float) -> np.ndarray:
    """Euclidean projection onto ``{lo <= x <= hi, sum x = total}``.

    ``sum clip(y - tau, lo, hi)`` is piecewise linear and nonincreasing in
    ``tau``; the root is located between consecutive breakpoints.
    """
    bps = np.sort(np.concatenate([y - hi, y - lo]))
    sums = np.clip(y[None, :] - bps[:, None], lo, hi).sum(axis=1)
    # sums is nonincreasing along bps
    k = np.searchsorted(-sums, -total, side="left")
    if k == 0:
        tau = bps[0]
    elif k >= len(bps):
        tau = bps[-1]
    else:
        s0, s1 = sums[k - 1], sums[k]
        t0, t1 = bps[k - 1], bps[k]
        tau = t0 if s0 == s1 else t0 + (s0 - total) * (t1 - t0) / (s0 - s1)
    return np.clip(y - tau, lo, hi)


def _augmented(sc: _Scaled, x, lam, rho):
    c = sc.ineq(x)
    shifted = np.maximum(0.0, lam + rho * c)
    val = sc.f(x) + np.sum(shifted ** 2 - lam ** 2) / (2.0 * rho)
    grad = sc.df(x) + shifted @ sc.dineq(x)
    return val, grad


def _spg(sc, x, lam, rho, project, tol, max_iter, memory=10):
    """Nonmonotone spectral projected gradient on the augmented Lagrangian."""
    val, grad = _augmented(sc, x, lam, rho)
    history = [val]
    step = 1.0 / max(1e-12, float(np.max(np.abs(project(x - grad) - x))))
    for it in range(max_iter):
        pg = project(x - grad) - x
        if np.max(np.abs(pg)) <= tol:
            return x, it
        d = project(x - step * grad) - x
        slope = grad @ d
        if slope >= 0:
            d, slope = pg, grad @ pg
        ref = max(history[-memory:])
        t = 1.0
        while True:
            xn = x + t * d
            vn, gn = _augmented(sc, xn, lam, rho)
            if vn <= ref + 1e-4 * t * slope or t < 1e-12:
                break
            t *= 0.5
        s_vec = xn - x
        y_vec = gn - grad
        sy = s_vec @ y_vec
        step = (s_vec @ s_vec) / sy if sy > 0 else 1e6
        step = min(max(step, 1e-10), 1e10)
        x, val, grad = xn, vn, gn
        history.append(val)
    return x, max_iter


def local_solve(prob: PowerSumProblem, x0, *, tol: float = 1e-11, max_outer: int = 40,
                max_inner: int = 2000) -> LocalResult:
    """One augmented-Lagrangian solve from ``x0``.

    The sum constraint and the box are enforced exactly by projection; the
    quadratic and product bounds carry multipliers.
    """
    sc = _Scaled(prob)
    lo, hi, total = prob.xi, prob.upper, prob.total
    project = lambda y: project_capped_simplex(y, lo, hi, total)  # noqa: E731
    x = project(np.asarray(x0, dtype=float))
    lam = np.zeros(2)
    rho = 10.0
    infeas_prev = np.inf
    inner_total = 0
    converged = False
    outer = 0
    inner_tol = 1e-5
    for outer in range(1, max_outer + 1):
        x, its = _spg(sc, x, lam, rho, project, inner_tol, max_inner)
        inner_total += its
        c = sc.ineq(x)
        infeas = float(np.max(np.abs(np.maximum(c, -lam / rho))))
        lam = np.maximum(0.0, lam + rho * c)
        if infeas <= tol and inner_tol <= tol and its < max_inner:
            converged = True
            break
        if infeas > 0.25 * infeas_prev:
            rho = min(rho * 10.0, 1e10)
        infeas_prev = infeas
        inner_tol = tol if infeas <= tol else max(tol, min(inner_tol, 1e-3 / rho))
    return LocalResult(
        x=x, value=prob.objective(x), outer_iterations=outer, inner_iterations=inner_total,
        converged=converged, multipliers={"lam": lam.copy(), "rho": rho},
    )


def polish(prob: PowerSumProblem, x, rtol: float = CLUSTER_RTOL) -> np.ndarray:
    """Replace clusters of nearly equal coordinates by their mean.

    Near a minimizer the feasible set is cusp-shaped, and coordinates that
    should coincide stay apart by roughly the square root of the constraint
    tolerance.  Averaging keeps the sum exact and can only raise the product
    and lower the sum of squares, so feasibility is preserved.
    """
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    breaks = np.flatnonzero(np.diff(xs) > rtol * np.maximum(1.0, xs[1:]))
    out = xs.copy()
    for seg in np.split(np.arange(len(xs)), breaks + 1):
        out[seg] = xs[seg].mean()
    res = np.empty_like(out)
    res[order] = out
    before = evaluate_constraints(prob, x).max_violation()
    if evaluate_constraints(prob, res).max_violation() <= max(before, 0.0) + 1e-15:
        return res
    return x


def random_feasible_starts(prob: PowerSumProblem, count: int, rng: np.random.Generator,
                           max_tries: int = 100_000) -> list[np.ndarray]:
    """Box samples rescaled onto the sum constraint, kept only if fully feasible."""
    out: list[np.ndarray] = []
    tries = 0
    while len(out) < count:
        if tries >= max_tries:
            raise NoFeasiblePointError(f"only {len(out)} of {count} random starts found")
        tries += 1
        y = rng.uniform(prob.xi, prob.upper, size=prob.n)
        x = y * (prob.total / y.sum())
        if evaluate_constraints(prob, x).feasible(0.0):
            out.append(x)
    return out


def start_points(prob: PowerSumProblem, starts: int, seed: int = DEFAULT_SEED) -> list[np.ndarray]:
    """Start set: the extremal point, the uniform point, then seeded random feasible points."""
    if starts < 1:
        raise ValueError("starts must be at least 1")
    pts = [prob.optimum_point(), prob.uniform_point()][:starts]
    if starts > 2:
        pts += random_feasible_starts(prob, starts - 2, np.random.default_rng(seed))
    return pts


def _better(a: LocalResult, b: LocalResult | None) -> bool:
    if b is None:
        return True
    return (a.value, tuple(a.x)) < (b.value, tuple(b.x))


def minimize(prob: PowerSumProblem, starts: int = DEFAULT_STARTS, seed: int = DEFAULT_SEED,
             return_all: bool = False):
    """Best feasible local minimum over the start set.

    Returns ``(point, value)``, or ``(point, value, all_results)`` with
    ``return_all``.  Ties on value are broken by lexicographic point order.
    """
    results = []
    best = None
    for i, x0 in enumerate(start_points(prob, starts, seed)):
        res = local_solve(prob, x0)
        res.x = polish(prob, res.x)
        res.value = prob.objective(res.x)
        res.start_index = i
        results.append(res)
        if not evaluate_constraints(prob, res.x).feasible():
            log.debug("start %d ended infeasible", i)
            continue
        if _better(res, best):
            best = res
    if best is None:
        raise NoFeasiblePointError("no start produced a feasible point")
    if return_all:
        return best.x, best.value, results
    return best.x, best.value
