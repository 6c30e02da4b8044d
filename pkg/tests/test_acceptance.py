"""Acceptance criteria 1-11, one test each.

Every test prints a single ``CRITERION k: PASS|FAIL ...`` line (collected
again in the terminal summary) before asserting.  Run standalone with
``python tests/test_acceptance.py``.  The n = 7 extension of criterion 3 is
opt-in via ``--runslow``.
"""

import itertools
import random
import time

import numpy as np
import pytest

from seidelkit.energy import (
    alpha_energy,
    check_trace_identities,
    limit_check,
)
from seidelkit.graph6_io import graph6_batch, parse_graph6
from seidelkit.graph_core import (
    Graph,
    complement,
    complete_graph,
    empty_graph,
    graph_from_edges,
    masks_to_bits,
    pair_count,
    seidel_matrices,
    seidel_matrix,
    switch,
)
from seidelkit.kkt_opt import (
    count_positive_roots,
    kkt_residual,
    make_problem,
    mfcq_witness,
    minimize,
    positive_roots,
    sample_bennett_premises,
    bennett_check,
)
from seidelkit.scan import scan
from seidelkit.spectral import (
    determinants_exact_batch,
    jacobi_eigenvalues,
    seidel_spectrum,
)

LINES: list[str] = []
SMALL_N = range(1, 7)
OPT_N = range(3, 9)
OPT_P = (0.1, 0.3, 0.5, 0.7, 0.9)


def _report(k: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def small_scans():
    t0 = time.perf_counter()
    out = {n: scan(n).summary for n in SMALL_N}
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def optimizer_runs():
    t0 = time.perf_counter()
    runs = {}
    for n, p in itertools.product(OPT_N, OPT_P):
        prob = make_problem(n, p)
        x, value = minimize(prob, 32, seed=0)
        runs[n, p] = (prob, x, value)
    return runs, time.perf_counter() - t0


def test_criterion_01_complete_graph_spectra():
    t0 = time.perf_counter()
    eig_err = energy_err = 0.0
    for n in range(2, 51):
        spec = seidel_spectrum(complete_graph(n))
        expected = np.array([1.0] * (n - 1) + [1.0 - n])
        eig_err = max(eig_err, float(np.abs(spec.values - expected).max()))
        energy_err = max(energy_err, abs(alpha_energy(spec, 1.0) - (2 * n - 2)))
    dt = time.perf_counter() - t0
    ok = eig_err <= 1e-10 and energy_err <= 1e-9 and dt < 5
    _report(1, ok, f"K_n, 2<=n<=50: max eig err {eig_err:.1e}, energy err {energy_err:.1e}, {dt:.2f}s")
    assert ok


def test_criterion_02_trace_identities(small_scans):
    summaries, dt = small_scans
    bad = sum(s.lemma31_violations for s in summaries.values())
    count = sum(s.graph_count for s in summaries.values())
    tight = 0.0
    for n in range(2, 7):
        rep = check_trace_identities(complete_graph(n))
        tight = max(tight, abs(rep.slack_fourth), abs(rep.slack_max))
    ok = bad == 0 and count == sum(1 << pair_count(n) for n in SMALL_N) and tight < 1e-9 and dt < 60
    _report(2, ok, f"{count} graphs n<=6: {bad} violations; K_n equality slack {tight:.1e}; {dt:.2f}s")
    assert ok


def test_criterion_03_theorem_sweep(small_scans):
    summaries, dt = small_scans
    bad = sum(s.theorem_violations for s in summaries.values())
    gated = sum(s.gate_count for s in summaries.values())
    worst = min(s.worst_alpha_margin for s in summaries.values() if s.worst_alpha_margin is not None)
    ok = bad == 0 and worst >= -1e-9 * 6 and dt < 120
    _report(3, ok, f"n<=6: {gated} gated graphs, {bad} violations, worst margin {worst:.1e}, {dt:.2f}s")
    assert ok


@pytest.mark.slow
def test_criterion_03_extended_n7():
    t0 = time.perf_counter()
    s = scan(7).summary
    dt = time.perf_counter() - t0
    ok = s.graph_count == 1 << 21 and s.theorem_violations == 0 and dt < 1800
    _report(3, ok, f"(extended) n=7: {s.graph_count} graphs, {s.gate_count} gated, "
                   f"{s.theorem_violations} violations, worst margin {s.worst_alpha_margin:.1e}, {dt:.1f}s")
    assert ok


def test_criterion_04_haemers_minimum(small_scans):
    summaries, _ = small_scans
    errs = {n: abs(s.min_energy - (2 * n - 2)) for n, s in summaries.items()}
    ok = max(errs.values()) <= 1e-9 and all(s.haemers_violations == 0 for s in summaries.values())
    _report(4, ok, f"min energy = 2n-2 for n<=6, max err {max(errs.values()):.1e}")
    assert ok


def test_criterion_05_optimizer(optimizer_runs):
    runs, dt = optimizer_runs
    failures = []
    for (n, p), (prob, x, value) in runs.items():
        rel = abs(value - prob.optimum_value()) / prob.optimum_value()
        point_err = float(np.abs(np.sort(x) - np.sort(prob.optimum_point())).max())
        rep = kkt_residual(prob, x)
        w = mfcq_witness(prob, x)
        if rel > 1e-6 or point_err > 1e-4 or not rep.certified or w is None:
            failures.append((n, p, rel, point_err, rep.certified))
    ok = not failures and dt < 120
    _report(5, ok, f"{len(runs)} (n,p) cases, {len(failures)} failures, {dt:.1f}s")
    assert ok, failures


def test_criterion_06_uniform_point_separation():
    worst = np.inf
    for n in range(3, 51):
        for p in np.linspace(0.01, 0.99, 99):
            prob = make_problem(n, float(p))
            gap = prob.objective(prob.uniform_point()) - prob.optimum_value()
            worst = min(worst, gap)
            assert prob.objective(prob.uniform_point()) == pytest.approx(n * (n - 1) ** p)
    ok = worst > 0
    _report(6, ok, f"3<=n<=50, 99 p values: smallest n(n-1)^p - optimum = {worst:.3e}")
    assert ok


def test_criterion_07_bennett_fuzz():
    t0 = time.perf_counter()
    grid = [k / 20 for k in range(21)]
    failures = [s for s in range(100_000) if not bennett_check(*sample_bennett_premises(s), p_grid=grid)]
    dt = time.perf_counter() - t0
    ok = not failures
    _report(7, ok, f"100000 tuples, 21-point p grid: {len(failures)} failures, {dt:.1f}s")
    assert ok, failures[:10]


def test_criterion_08_root_count(optimizer_runs):
    runs, _ = optimizer_runs
    worst_count = 0
    worst_dist = 0.0
    for (n, p), (prob, x, _) in runs.items():
        rep = kkt_residual(prob, x)
        assert rep.certified
        roots = positive_roots(p, rep.delta_product, rep.mu, rep.lam)
        worst_count = max(worst_count, count_positive_roots(p, rep.delta_product, rep.mu, rep.lam))
        for v in np.unique(np.round(x, 8)):
            worst_dist = max(worst_dist, float(np.min(np.abs(roots - v))) if len(roots) else np.inf)
    ok = worst_count <= 2 and worst_dist <= 1e-6
    _report(8, ok, f"{len(runs)} minimizers: max root count {worst_count}, "
                   f"max coordinate-to-root distance {worst_dist:.1e}")
    assert ok


def _all_spectra(n):
    bits = masks_to_bits(np.arange(1 << pair_count(n), dtype=np.uint64), n)
    stack = seidel_matrices(bits, n)
    vals, _ = jacobi_eigenvalues(stack)
    return stack, vals


def test_criterion_09_oracle_cross_checks():
    t0 = time.perf_counter()
    worst_det = 0.0
    for n in SMALL_N:
        stack, vals = _all_spectra(n)
        dets = determinants_exact_batch(stack).astype(float)
        rel = np.abs(vals.prod(axis=1) - dets) / np.maximum(1.0, np.abs(dets))
        worst_det = max(worst_det, float(rel.max()))

    worst_inv = 0.0
    for n in range(1, 6):
        _, vals = _all_spectra(n)
        full = (1 << pair_count(n)) - 1
        for mask in range(1 << pair_count(n)):
            g = Graph(n, mask)
            worst_inv = max(worst_inv, float(np.abs(vals[full ^ mask] + vals[mask][::-1]).max()))
            for r in range(n + 1):
                for subset in itertools.combinations(range(n), r):
                    h = switch(g, subset)
                    worst_inv = max(worst_inv, float(np.abs(vals[h.mask] - vals[mask]).max()))

    rng = random.Random(12)
    n = 12
    graphs = [Graph(n, rng.getrandbits(pair_count(n))) for _ in range(10_000)]
    subsets = [[v for v in range(n) if rng.random() < 0.5] for _ in graphs]
    base = np.stack([seidel_matrix(g) for g in graphs])
    sw = np.stack([seidel_matrix(switch(g, u)) for g, u in zip(graphs, subsets)])
    co = np.stack([seidel_matrix(complement(g)) for g in graphs])
    vb, _ = jacobi_eigenvalues(base)
    vs, _ = jacobi_eigenvalues(sw)
    vc, _ = jacobi_eigenvalues(co)
    worst_rand = max(float(np.abs(vb - vs).max()), float(np.abs(vb + vc[:, ::-1]).max()))
    dt = time.perf_counter() - t0
    ok = worst_det <= 1e-8 and worst_inv <= 1e-9 and worst_rand <= 1e-9
    _report(9, ok, f"det vs product max rel {worst_det:.1e}; invariance exhaustive n<=5 {worst_inv:.1e}, "
                   f"10^4 random n=12 {worst_rand:.1e}; {dt:.1f}s")
    assert ok


def test_criterion_10_limit_identity():
    rng = random.Random(2024)
    worst, seen = 0.0, 0
    while seen < 100:
        n = rng.randint(2, 8)
        g = Graph(n, rng.getrandbits(pair_count(n)))
        spec = seidel_spectrum(g)
        if abs(spec.meta["det"]) < n - 1 or np.any(spec.values == 0):
            continue
        worst = max(worst, limit_check(spec, 1e-4))
        seen += 1
    ok = worst <= 1e-3
    _report(10, ok, f"100 gated spectra n<=8: max relative error {worst:.2e} at alpha=1e-4")
    assert ok


def test_criterion_11_graph6_round_trip(golden):
    t0 = time.perf_counter()
    bad = 0
    for n in range(1, 8):
        total = 1 << pair_count(n)
        for start in range(0, total, 1 << 16):
            masks = np.arange(start, min(total, start + (1 << 16)), dtype=np.uint64)
            names = graph6_batch(masks_to_bits(masks, n), n)
            bad += sum(parse_graph6(s).mask != int(m) for s, m in zip(names, masks))
    fixtures = {
        "k4": complete_graph(4),
        "empty4": empty_graph(4),
        "edge2": graph_from_edges(2, [(0, 1)]),
    }
    golden_ok = all(parse_graph6((golden / f"{k}.g6").read_text().strip()) == g for k, g in fixtures.items())
    golden_ok &= [(golden / f"{k}.g6").read_text().strip() for k in fixtures] == ["C~", "C?", "A_"]
    dt = time.perf_counter() - t0
    ok = bad == 0 and golden_ok
    _report(11, ok, f"exhaustive n<=7 round trip: {bad} mismatches; golden fixtures "
                    f"{'match' if golden_ok else 'differ'}; {dt:.1f}s")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
