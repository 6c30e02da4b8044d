"""Dense symmetric eigenvalues (Jacobi rotations) and exact integer determinants.

The eigensolver works on a stack of matrices at once.  Each sweep visits
every off-diagonal pair exactly once, grouped into ``n/2`` disjoint pairs
per step (round-robin ordering), so a step is a handful of vectorized row
and column updates regardless of how many matrices are in the stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .graph_core import Graph, seidel_matrix

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12
# Bareiss intermediates are products of two minors of a {-1,0,1} matrix,
# bounded by n**n (Hadamard); 15**15 < 2**63.
INT64_BAREISS_MAX_N = 15


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted in descending order.

    ``residual`` is the off-diagonal Frobenius mass left after the final
    rotation, relative to the Frobenius norm of the input.
    """

    values: np.ndarray
    residual: float = 0.0
    tol: float = DEFAULT_TOL
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_values(cls, values, residual: float = 0.0) -> "Spectrum":
        v = np.sort(np.asarray(values, dtype=float))[::-1].copy()
        v.setflags(write=False)
        return cls(v, residual)

    @property
    def n(self) -> int:
        return len(self.values)

    def product(self) -> float:
        return float(np.prod(self.values))

    def __len__(self) -> int:
        return len(self.values)


@lru_cache(maxsize=None)
def round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Steps of disjoint (p, q) pairs, p < q, covering every pair once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    steps = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        steps.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(steps)


def _offdiag_sq(a: np.ndarray) -> np.ndarray:
    # upper triangle only, doubled; subtracting the diagonal from the total cancels badly
    iu = np.triu_indices(a.shape[-1], 1)
    upper = a[..., iu[0], iu[1]]
    return 2.0 * np.einsum("...k,...k->...", upper, upper)


def jacobi_eigenvalues(m: np.ndarray, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues of each symmetric matrix in a ``(..., n, n)`` stack.

    Returns ``(values, residuals)``; values are sorted descending along the
    last axis and residuals are the relative off-diagonal norms at exit.
    """
    a = np.array(m, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError("expected a square matrix or a stack of square matrices")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lead = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))
    asym = np.abs(a - np.swapaxes(a, -1, -2)).max(initial=0.0)
    if asym > SYMMETRY_TOL * max(1.0, np.abs(a).max(initial=0.0)):
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
    a = 0.5 * (a + np.swapaxes(a, -1, -2))

    fro2 = np.einsum("bij,bij->b", a, a)
    target = tol * tol * fro2
    steps = round_robin(n)
    off = _offdiag_sq(a)
    sweeps = 0
    while np.any(off > target):
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p, q in steps:
            app = a[:, p, p]
            aqq = a[:, q, q]
            apq = a[:, p, q]
            nz = apq != 0.0
            safe = np.where(nz, apq, 1.0)
            with np.errstate(over="ignore", divide="ignore"):
                # huge theta means a negligible rotation; t -> 0 is the right limit
                theta = (aqq - app) / (2.0 * safe)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(theta == 0.0, 1.0, t)
            t = np.where(nz, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cb, sb = c[:, :, None], s[:, :, None]
            rp, rq = a[:, p, :], a[:, q, :]
            a[:, p, :], a[:, q, :] = cb * rp - sb * rq, sb * rp + cb * rq
            cp, cq = a[:, :, p], a[:, :, q]
            a[:, :, p], a[:, :, q] = cp * c[:, None, :] - cq * s[:, None, :], cp * s[:, None, :] + cq * c[:, None, :]
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0
        sweeps += 1
        off = _offdiag_sq(a)

    values = -np.sort(-np.einsum("bii->bi", a), axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        residuals = np.where(fro2 > 0, np.sqrt(np.maximum(off, 0.0) / np.where(fro2 > 0, fro2, 1.0)), 0.0)
    return values.reshape(lead + (n,)), residuals.reshape(lead)


def eigenvalues_symmetric(m, tol: float = DEFAULT_TOL) -> Spectrum:
    """Spectrum of a single symmetric matrix via cyclic Jacobi rotations."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise ValueError("eigenvalues_symmetric takes one square matrix")
    vals, res = jacobi_eigenvalues(arr, tol)
    vals.setflags(write=False)
    return Spectrum(vals, float(res), tol)


def _bareiss(rows: list[list[int]], n: int) -> tuple[int, int]:
    """Fraction-free elimination in place; returns (determinant, rank)."""
    sign = 1
    prev = 1
    rank = 0
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
            sign = -sign
        pr = rows[r]
        pv = pr[col]
        for i in range(r + 1, n):
            ri = rows[i]
            f = ri[col]
            for j in range(col + 1, n):
                ri[j] = (pv * ri[j] - f * pr[j]) // prev
            ri[col] = 0
        prev = pv
        r += 1
        rank += 1
    det = sign * rows[n - 1][n - 1] if rank == n and n > 0 else (1 if n == 0 else 0)
    return det, rank


def determinant_exact(m) -> int:
    """Exact determinant of an integer matrix (Bareiss elimination, Python ints)."""
    rows = [[int(v) for v in row] for row in m]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant needs a square matrix")
    return _bareiss(rows, n)[0]


def rank_exact(m) -> int:
    rows = [[int(v) for v in row] for row in m]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("rank_exact needs a square matrix")
    return _bareiss(rows, n)[1]


def determinants_exact_batch(stack: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of {-1, 0, 1} matrices using int64 Bareiss.

    Exactness relies on the Hadamard bound, so only ``n <= 15`` is accepted.
    """
    a = np.array(stack, dtype=np.int64)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected a (batch, n, n) stack")
    b, n, _ = a.shape
    if n > INT64_BAREISS_MAX_N:
        raise ValueError(f"int64 Bareiss is exact only for n <= {INT64_BAREISS_MAX_N}")
    if np.abs(a).max(initial=0) > 1:
        raise ValueError("batched determinant accepts entries in {-1, 0, 1} only")
    if n == 0:
        return np.ones(b, dtype=np.int64)
    sign = np.ones(b, dtype=np.int64)
    prev = np.ones(b, dtype=np.int64)
    alive = np.ones(b, dtype=bool)
    idx = np.arange(b)
    for k in range(n):
        col = a[:, k:, k]
        has = col != 0
        found = has.any(axis=1)
        alive &= found
        piv = k + np.argmax(has, axis=1)
        swap = alive & (piv != k)
        if swap.any():
            si = idx[swap]
            pk = piv[swap]
            rk = a[si, k, :].copy()
            a[si, k, :] = a[si, pk, :]
            a[si, pk, :] = rk
            sign[swap] = -sign[swap]
        if k == n - 1:
            break
        pv = np.where(alive, a[:, k, k], 1)
        sub = a[:, k + 1:, k + 1:]
        f = a[:, k + 1:, k][:, :, None]
        prow = a[:, k, k + 1:][:, None, :]
        num = pv[:, None, None] * sub - f * prow
        a[:, k + 1:, k + 1:] = num // prev[:, None, None]
        a[:, k + 1:, k] = 0
        prev = pv
    return np.where(alive, sign * a[:, n - 1, n - 1], 0)


def power_sums(s: Spectrum, k: int) -> float:
    """Sum of the k-th powers of the eigenvalues, k in {2, 4}."""
    if k not in (2, 4):
        raise ValueError(f"power_sums supports k in {{2, 4}}, got {k}")
    return float(np.sum(np.abs(s.values) ** float(k)))


def seidel_spectrum(g: Graph, tol: float = DEFAULT_TOL) -> Spectrum:
    """Seidel spectrum with exact zero eigenvalues.

    When ``S(g)`` is singular the ``n - rank`` eigenvalues of smallest
    magnitude are set to exactly 0, using the exact rank from Bareiss.
    """
    s = seidel_matrix(g)
    spec = eigenvalues_symmetric(s, tol)
    det, rank = _bareiss(s.tolist(), g.n)
    values = snap_zero_eigenvalues(spec.values, g.n - rank)
    values.setflags(write=False)
    return Spectrum(values, spec.residual, tol, {"det": det, "rank": rank})


def snap_zero_eigenvalues(values: np.ndarray, nullity) -> np.ndarray:
    """Zero the ``nullity`` smallest-magnitude entries along the last axis."""
    v = np.array(values, dtype=float)
    nullity = np.asarray(nullity)
    if not np.any(nullity):
        return v
    order = np.argsort(np.abs(v), axis=-1, kind="stable")
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.arange(v.shape[-1]), axis=-1)
    v[ranks < nullity[..., None] if nullity.ndim else ranks < nullity] = 0.0
    return v


def seidel_determinant(g: Graph) -> int:
    return determinant_exact(seidel_matrix(g))
