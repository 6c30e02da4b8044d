"""Batch verification over enumerated or file-supplied graphs.

Work is split into fixed-size chunks (mask intervals for enumeration, line
ranges for files).  Chunk boundaries never depend on the worker count and
the summary fold is associative and commutative, so output is identical
for any number of workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .energy import IDENTITY_RTOL, MARGIN_TOL, alpha_bound, alpha_energies, alpha_grid
from .graph6_io import Graph6Error, enumeration_size, graph6_batch, parse_graph6, read_graph6_file
from .graph_core import mask_to_bits, masks_to_bits, pair_count, seidel_matrices
from .spectral import (
    INT64_BAREISS_MAX_N,
    determinant_exact,
    determinants_exact_batch,
    jacobi_eigenvalues,
    rank_exact,
    snap_zero_eigenvalues,
)

log = logging.getLogger(__name__)

CHUNK_SIZE = 4096
HAEMERS_TOL = 1e-9
# energies are compared on this grid when picking the witness, so
# floating-point noise between isomorphic graphs cannot decide the tie
WITNESS_DECIMALS = 9


@dataclass(frozen=True)
class GraphRow:
    graph6: str
    n: int
    det: int
    energy: float
    gate: bool
    min_alpha_margin: float
    lemma31_ok: bool


@dataclass
class ScanSummary:
    graph_count: int = 0
    min_energy: float | None = None
    min_energy_witness: str | None = None
    min_energy_gap: float | None = None
    gate_count: int = 0
    theorem_violations: int = 0
    lemma31_violations: int = 0
    haemers_violations: int = 0
    worst_alpha_margin: float | None = None
    parse_errors: int = 0

    @property
    def gate_fraction(self) -> float | None:
        return self.gate_count / self.graph_count if self.graph_count else None

    @property
    def violation_count(self) -> int:
        return self.theorem_violations + self.lemma31_violations + self.haemers_violations

    def merge(self, other: "ScanSummary") -> "ScanSummary":
        out = ScanSummary(
            graph_count=self.graph_count + other.graph_count,
            gate_count=self.gate_count + other.gate_count,
            theorem_violations=self.theorem_violations + other.theorem_violations,
            lemma31_violations=self.lemma31_violations + other.lemma31_violations,
            haemers_violations=self.haemers_violations + other.haemers_violations,
            parse_errors=self.parse_errors + other.parse_errors,
            min_energy_gap=_opt_min(self.min_energy_gap, other.min_energy_gap),
            worst_alpha_margin=_opt_min(self.worst_alpha_margin, other.worst_alpha_margin),
        )
        cands = [s for s in (self, other) if s.min_energy is not None]
        if cands:
            best = min(cands, key=lambda s: _witness_key(s.min_energy, s.min_energy_witness))
            out.min_energy = best.min_energy
            out.min_energy_witness = best.min_energy_witness
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gate_fraction"] = self.gate_fraction
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScanSummary":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def _opt_min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _witness_key(energy: float, graph6: str):
    return (round(energy, WITNESS_DECIMALS), graph6)


@dataclass
class ChunkResult:
    summary: ScanSummary
    rows: list[GraphRow] | None
    errors: list[tuple[int, str]]


def evaluate_bits(bits: np.ndarray, n: int, grid, want_rows: bool = False,
                  graph6: list[str] | None = None) -> ChunkResult:
    """Run every checker on a batch of same-size graphs given by edge bits."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 2 or bits.shape[1] != pair_count(n):
        raise ValueError(f"expected edge bits of shape (batch, {pair_count(n)})")
    count = bits.shape[0]
    if count == 0:
        return ChunkResult(ScanSummary(), [] if want_rows else None, [])
    s = seidel_matrices(bits, n)
    if n <= INT64_BAREISS_MAX_N:
        dets = determinants_exact_batch(s).tolist()
    else:
        dets = [determinant_exact(m) for m in s]
    vals, _ = jacobi_eigenvalues(s)
    singular = [i for i, dv in enumerate(dets) if dv == 0]
    if singular:
        nullity = np.zeros(count, dtype=np.int64)
        for i in singular:
            nullity[i] = n - rank_exact(s[i])
        vals = snap_zero_eigenvalues(vals, nullity)
    absv = np.abs(vals)
    energy = absv.sum(axis=1)
    margins = alpha_energies(absv, grid) - alpha_bound(n, grid)
    min_margin = margins.min(axis=1)
    gate = np.array([abs(dv) >= n - 1 for dv in dets], dtype=bool)

    sq = absv * absv
    lemma_ok = (
        (np.abs(sq.sum(axis=1) - n * (n - 1)) <= IDENTITY_RTOL * n * n)
        & ((n - 1) ** 4 + n - 1 - (sq * sq).sum(axis=1) >= -IDENTITY_RTOL * n ** 4)
        & ((n - 1) ** 2 - sq.max(axis=1) >= -IDENTITY_RTOL * n * n)
    )
    gap = energy - (2 * n - 2)
    theorem_bad = gate & (min_margin < -MARGIN_TOL * n)

    summary = ScanSummary(
        graph_count=count,
        gate_count=int(gate.sum()),
        theorem_violations=int(theorem_bad.sum()),
        lemma31_violations=int((~lemma_ok).sum()),
        haemers_violations=int((gap < -HAEMERS_TOL).sum()),
        min_energy_gap=float(gap.min()),
        worst_alpha_margin=float(min_margin[gate].min()) if gate.any() else None,
    )
    rounded = np.round(energy, WITNESS_DECIMALS)
    cand = np.flatnonzero(rounded == rounded.min())
    names = graph6 if graph6 is not None else (graph6_batch(bits, n) if want_rows else None)
    cand_names = [names[i] for i in cand] if names is not None else graph6_batch(bits[cand], n)
    w = min(range(len(cand)), key=lambda k: cand_names[k])
    summary.min_energy = float(energy[cand[w]])
    summary.min_energy_witness = cand_names[w]

    rows = None
    if want_rows:
        if names is None:
            names = graph6_batch(bits, n)
        rows = [
            GraphRow(names[i], n, int(dets[i]), float(energy[i]), bool(gate[i]),
                     float(min_margin[i]), bool(lemma_ok[i]))
            for i in range(count)
        ]
    for i in np.flatnonzero(theorem_bad):
        log.error("theorem violation at %s", graph6_batch(bits[i:i + 1], n)[0])
    return ChunkResult(summary, rows, [])


def _enum_chunk(task) -> ChunkResult:
    n, start, stop, grid, want_rows = task
    bits = masks_to_bits(np.arange(start, stop, dtype=np.uint64), n)
    return evaluate_bits(bits, n, grid, want_rows)


def _line_chunk(task) -> ChunkResult:
    lines, grid, want_rows = task
    groups: dict[int, list[tuple[int, str, np.ndarray]]] = {}
    errors = []
    order = []
    for lineno, text in lines:
        try:
            g = parse_graph6(text)
        except Graph6Error as exc:
            errors.append((lineno, str(exc)))
            continue
        key = len(groups.setdefault(g.n, []))
        groups[g.n].append((lineno, text, mask_to_bits(g.mask, pair_count(g.n))))
        order.append((g.n, key))
    total = ScanSummary(parse_errors=len(errors))
    by_n_rows = {}
    for n in sorted(groups):
        items = groups[n]
        bits = np.stack([it[2] for it in items]) if items else np.zeros((0, pair_count(n)), np.uint8)
        # canonical graph6 of the parsed graph, which is also what a witness reports
        res = evaluate_bits(bits, n, grid, want_rows, graph6_batch(bits, n))
        total = total.merge(res.summary)
        by_n_rows[n] = res.rows
    rows = [by_n_rows[n][k] for n, k in order] if want_rows else None
    for lineno, msg in errors:
        log.warning("line %d: %s", lineno, msg)
    return ChunkResult(total, rows, errors)


def enumeration_tasks(n: int, grid, want_rows: bool, chunk: int = CHUNK_SIZE):
    total = enumeration_size(n)
    for start in range(0, total, chunk):
        yield (n, start, min(start + chunk, total), grid, want_rows)


def file_tasks(path, grid, want_rows: bool, chunk: int = CHUNK_SIZE):
    buf = []
    for item in read_graph6_file(path):
        buf.append(item)
        if len(buf) == chunk:
            yield (buf, grid, want_rows)
            buf = []
    if buf:
        yield (buf, grid, want_rows)


def _run(func, tasks: Iterable, workers: int) -> Iterator[ChunkResult]:
    if workers <= 1:
        for t in tasks:
            yield func(t)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(func, tasks)


@dataclass
class ScanResult:
    summary: ScanSummary
    rows: list[GraphRow] | None
    errors: list[tuple[int, str]]


def scan(source, grid=None, workers: int = 1, want_rows: bool = False) -> ScanResult:
    """Evaluate every graph from ``source`` exactly once.

    ``source`` is either an int ``n`` (all labeled graphs on ``n`` vertices)
    or a path to a graph6 file.  Unparseable lines are counted and logged
    with their line number; the scan carries on.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    grid = alpha_grid(grid)
    if isinstance(source, (int, np.integer)):
        results = _run(_enum_chunk, enumeration_tasks(int(source), grid, want_rows), workers)
    else:
        path = Path(source)
        if not path.is_file():
            raise FileNotFoundError(f"graph6 file not found: {path}")
        results = _run(_line_chunk, file_tasks(path, grid, want_rows), workers)
    summary = ScanSummary()
    rows: list[GraphRow] | None = [] if want_rows else None
    errors: list[tuple[int, str]] = []
    for res in results:
        summary = summary.merge(res.summary)
        errors.extend(res.errors)
        if want_rows:
            rows.extend(res.rows)
    return ScanResult(summary, rows, errors)
