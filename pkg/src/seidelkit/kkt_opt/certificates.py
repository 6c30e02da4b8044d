"""Solver-independent first-order certificates at a point of the problem.

Multipliers are recovered from the point alone, by bounded least squares on
the stationarity system restricted to active constraints, so a certificate
never trusts the duals of whatever produced the point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import lsq_linear

from .problem import FEAS_RTOL, PowerSumProblem, evaluate_constraints

ACTIVE_RTOL = 1e-8
STATIONARITY_TOL = 1e-6
COMPLEMENTARITY_TOL = 1e-8
SIGN_TOL = 1e-8
# tiny ridge on the normalised columns; makes the least-squares solution
# unique when the chosen gradients are dependent
RIDGE = 1e-10

ROOT_GRID_POINTS = 1_000_000
ROOT_GRID_MIN = 1e-12
ROOT_ZERO_RTOL = 1e-9
DEFAULT_X_MAX = 1e6


class InfeasiblePointError(ValueError):
    pass


class MFCQError(RuntimeError):
    """The canonical direction failed to certify MFCQ at a feasible point."""


@dataclass(frozen=True)
class KKTReport:
    mu: float
    lam: float
    delta: float
    rho: np.ndarray
    gamma: np.ndarray
    product: float
    active: tuple[str, ...]
    stationarity_residual: float
    complementarity_residual: float
    min_inequality_multiplier: float
    feasibility: dict
    certified: bool

    @property
    def delta_product(self) -> float:
        """delta * prod(x), the constant term of the per-coordinate root equation."""
        return self.delta * self.product

    def as_dict(self) -> dict:
        return {
            "certified": self.certified,
            "mu": self.mu,
            "lambda": self.lam,
            "delta": self.delta,
            "rho": self.rho.tolist(),
            "gamma": self.gamma.tolist(),
            "delta_product": self.delta_product,
            "active": list(self.active),
            "stationarity_residual": self.stationarity_residual,
            "complementarity_residual": self.complementarity_residual,
            "min_inequality_multiplier": self.min_inequality_multiplier,
            "feasibility": self.feasibility,
        }


def active_set(prob: PowerSumProblem, x) -> dict[str, np.ndarray | bool]:
    """Which inequality constraints are within ``ACTIVE_RTOL`` (scaled) of zero."""
    cv = evaluate_constraints(prob, x)
    s = cv.scales
    return {
        "h": cv.h >= -ACTIVE_RTOL * s["h"],
        "d": cv.d >= -ACTIVE_RTOL * s["d"],
        "k": cv.k >= -ACTIVE_RTOL * s["k"],
        "l": cv.l >= -ACTIVE_RTOL * s["l"],
    }


def _gradients(prob: PowerSumProblem, x: np.ndarray):
    n = prob.n
    prod = float(np.prod(x))
    eye = np.eye(n)
    return {
        "f": prob.objective_grad(x),
        "g": np.ones(n),
        "h": 2.0 * x,
        "d": -prod / x,
        "k": eye,
        "l": -eye,
    }, prod


def _recover(grad_f, columns, free):
    """Bounded ridge least squares for ``grad_f + A m = 0``; returns m."""
    if not columns:
        return np.zeros(0)
    a = np.column_stack(columns)
    norms = np.linalg.norm(a, axis=0)
    norms[norms == 0] = 1.0
    an = a / norms
    k = an.shape[1]
    lhs = np.vstack([an, RIDGE * np.eye(k)])
    rhs = np.concatenate([-grad_f, np.zeros(k)])
    lb = np.where(free, -np.inf, 0.0)
    sol = lsq_linear(lhs, rhs, bounds=(lb, np.full(k, np.inf)), method="bvls", tol=1e-15)
    return sol.x / norms


def kkt_residual(prob: PowerSumProblem, x) -> KKTReport:
    """Recover multipliers at ``x`` and test the first-order conditions.

    Candidate multiplier supports are tried from sparsest to fullest (sum
    only, then product and/or quadratic bound, then box bounds); the first
    one that makes the point stationary is reported.
    """
    x = np.asarray(x, dtype=float)
    cv = evaluate_constraints(prob, x)
    if not cv.feasible(10 * FEAS_RTOL):
        raise InfeasiblePointError(f"point violates constraints: {cv.violations()}")
    grads, prod = _gradients(prob, x)
    act = active_set(prob, x)
    n = prob.n

    def attempt(names, use_box):
        cols, free, tags = [grads["g"]], [True], [("g", None)]
        for name in names:
            cols.append(grads[name])
            free.append(False)
            tags.append((name, None))
        if use_box:
            for name in ("k", "l"):
                for i in np.flatnonzero(act[name]):
                    cols.append(grads[name][:, i])
                    free.append(False)
                    tags.append((name, int(i)))
        m = _recover(grads["f"], cols, np.array(free))
        resid = grads["f"] + np.column_stack(cols) @ m
        return m, tags, float(np.max(np.abs(resid)))

    # sparsest support first: the multiplier set is not a singleton at
    # degenerate points, and zero multipliers are always admissible
    smooth = [nm for nm in ("d", "h") if act[nm]]
    supports = [(), *[(nm,) for nm in smooth]]
    if len(smooth) == 2:
        supports.append(("h", "d"))
    box_active = bool(act["k"].any() or act["l"].any())
    candidates = [(sup, False) for sup in supports]
    if box_active:
        candidates.append((tuple(smooth), True))
    best = None
    for sup, use_box in candidates:
        trial = attempt(sup, use_box)
        if best is None or trial[2] < best[2]:
            best = trial
        if trial[2] <= STATIONARITY_TOL:
            best = trial
            break
    m, tags, stat = best

    mult = {"g": 0.0, "h": 0.0, "d": 0.0}
    rho = np.zeros(n)
    gamma = np.zeros(n)
    for val, (name, i) in zip(m, tags):
        if name == "k":
            rho[i] = val
        elif name == "l":
            gamma[i] = val
        else:
            mult[name] = float(val)

    ineq_mults = np.concatenate([[mult["h"], mult["d"]], rho, gamma])
    ineq_vals = np.concatenate([[cv.h, cv.d], cv.k, cv.l])
    comp = float(np.max(np.abs(ineq_mults * ineq_vals)))
    min_mult = float(ineq_mults.min())
    active_names = tuple(
        [nm for nm in ("h", "d") if act[nm]]
        + [f"k{i + 1}" for i in np.flatnonzero(act["k"])]
        + [f"l{i + 1}" for i in np.flatnonzero(act["l"])]
    )
    certified = stat <= STATIONARITY_TOL and comp <= COMPLEMENTARITY_TOL and min_mult >= -SIGN_TOL
    return KKTReport(
        mu=mult["g"], lam=mult["h"], delta=mult["d"], rho=rho, gamma=gamma, product=prod,
        active=active_names, stationarity_residual=stat, complementarity_residual=comp,
        min_inequality_multiplier=min_mult, feasibility=cv.violations(), certified=certified,
    )


def mfcq_witness(prob: PowerSumProblem, x) -> np.ndarray | None:
    """Direction certifying MFCQ at a feasible ``x``; None when all coordinates are equal.

    The direction moves mass from the first largest coordinate to the last
    smallest one.
    Raises :class:`MFCQError` if it fails to strictly decrease some active
    inequality constraint.
    """
    x = np.asarray(x, dtype=float)
    cv = evaluate_constraints(prob, x)
    if not cv.feasible(10 * FEAS_RTOL):
        raise InfeasiblePointError(f"point violates constraints: {cv.violations()}")
    if np.ptp(x) <= 1e-12 * max(1.0, float(np.max(np.abs(x)))):
        return None
    hi = int(np.argmax(x))
    lo = prob.n - 1 - int(np.argmin(x[::-1]))
    w = np.zeros(prob.n)
    w[hi] = -1.0
    w[lo] = 1.0
    grads, _ = _gradients(prob, x)
    if abs(grads["g"] @ w) > 1e-12:
        raise MFCQError("witness is not tangent to the sum constraint")
    act = active_set(prob, x)
    checks = []
    for name in ("h", "d"):
        if act[name]:
            checks.append((name, float(grads[name] @ w)))
    for name in ("k", "l"):
        for i in np.flatnonzero(act[name]):
            checks.append((f"{name}{i + 1}", float(grads[name][:, i] @ w)))
    bad = [(nm, v) for nm, v in checks if not v < 0]
    if bad:
        raise MFCQError(f"witness does not decrease active constraints: {bad}")
    return w


def _root_function(p, a_const, mu, lam):
    def phi(x):
        return p * x ** p - (a_const - mu * x - 2.0 * lam * x * x)

    def scale(x):
        return p * x ** p + abs(a_const) + abs(mu) * x + 2.0 * abs(lam) * x * x

    return phi, scale


def positive_roots(p: float, a_const: float, mu: float, lam: float,
                   x_max: float | None = None, points: int = ROOT_GRID_POINTS) -> np.ndarray:
    """Positive roots of ``p x**p = A - mu x - 2 lam x**2`` on a geometric grid.

    Sign changes between grid points are refined by bisection.  Values
    within ``ROOT_ZERO_RTOL`` of zero (relative to the size of the terms)
    count as zeros, and a run of such grid points is one root.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    x_max = DEFAULT_X_MAX if x_max is None else float(x_max)
    if x_max <= ROOT_GRID_MIN:
        raise ValueError("x_max must exceed the grid start")
    phi, scale = _root_function(p, a_const, mu, lam)
    xs = np.geomspace(ROOT_GRID_MIN, x_max, points)
    vals = phi(xs)
    sgn = np.sign(vals)
    sgn[np.abs(vals) <= ROOT_ZERO_RTOL * scale(xs)] = 0
    zero = sgn == 0
    roots = []
    # each maximal run of near-zero grid values is one root
    edges = np.diff(np.concatenate([[False], zero, [False]]).astype(np.int8))
    for a, b in zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1) - 1):
        roots.append(float(np.sqrt(xs[a] * xs[b])))
    # strict sign changes between adjacent nonzero grid values
    change = np.flatnonzero(~zero[:-1] & ~zero[1:] & (sgn[:-1] != sgn[1:]))
    for i in change:
        roots.append(_bisect(phi, xs[i], xs[i + 1]))
    return np.array(sorted(roots))


def _bisect(phi, lo: float, hi: float, iters: int = 200) -> float:
    flo = phi(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = phi(mid)
        if fm == 0 or mid in (lo, hi):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def count_positive_roots(p: float, a_const: float, mu: float, lam: float,
                         x_max: float | None = None) -> int:
    return len(positive_roots(p, a_const, mu, lam, x_max))
