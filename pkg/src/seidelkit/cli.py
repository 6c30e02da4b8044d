"""Command-line front end.

Exit status: 0 when every check is clean, 2 when a violation counter is
nonzero (or a certificate fails), 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings

import numpy as np

from . import __version__
from .energy import (
    NoFailingAlphaFound,
    alpha_energy,
    alpha_grid,
    check_theorem_forward,
    find_failing_alpha,
    limit_check,
    trace_identities,
)
from .graph6_io import Graph6Error, parse_graph6
from .kkt_opt import (
    MFCQError,
    bennett_check,
    embed_spectrum,
    evaluate_constraints,
    kkt_residual,
    make_problem,
    mfcq_witness,
    minimize,
    positive_roots,
    sample_bennett_premises,
)
from .report import format_float, report_emit, rows_csv
from .scan import scan
from .spectral import seidel_spectrum

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid_arg(text: str):
    try:
        return alpha_grid(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2, default=_json_default) + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def cmd_spectrum(args) -> int:
    spec = seidel_spectrum(args.graph)
    if args.format == "csv":
        sys.stdout.write(",".join(format_float(v) for v in spec.values) + "\n")
    else:
        _emit({"n": spec.n, "eigenvalues": spec.values, "residual": spec.residual}, args)
    return EXIT_OK


def cmd_energy(args) -> int:
    spec = seidel_spectrum(args.graph)
    _emit({
        "n": spec.n,
        "energy": alpha_energy(spec, 1.0),
        "alpha_energies": {str(a): alpha_energy(spec, a) for a in args.alpha_grid},
    }, args)
    return EXIT_OK


def cmd_det(args) -> int:
    spec = seidel_spectrum(args.graph)
    det = spec.meta["det"]
    _emit({"n": spec.n, "det": str(det), "gate": abs(det) >= spec.n - 1}, args)
    return EXIT_OK


def cmd_check(args) -> int:
    g = args.graph
    spec = seidel_spectrum(g)
    traces = trace_identities(spec, g.n)
    thm = check_theorem_forward(g, args.alpha_grid)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NoFailingAlphaFound)
        failing = find_failing_alpha(spec, g.n)
    out = {
        "graph6": args.graph6_text,
        "n": g.n,
        "eigenvalues": spec.values,
        "det": str(thm.det_exact),
        "gate": thm.gate_holds,
        "energy": thm.energy,
        "haemers_margin": thm.haemers_margin,
        "alpha_margins": dict(zip(map(str, thm.alphas), thm.margins)),
        "theorem_violated": thm.violated,
        "trace_identities": {
            "sum_sq": traces.sum_sq, "sum_fourth": traces.sum_fourth, "max_sq": traces.max_sq,
            "ok": [traces.ok_sq, traces.ok_fourth, traces.ok_max],
        },
        "failing_alpha": failing,
        "failing_alpha_cutoff_hit": any(issubclass(w.category, NoFailingAlphaFound) for w in caught),
    }
    if np.all(spec.values != 0):
        out["limit_relative_error"] = limit_check(spec, 1e-4)
    if g.n >= 3 and thm.gate_holds:
        prob, x = embed_spectrum(spec, 1.0)
        out["embedding_feasible"] = evaluate_constraints(prob, x).feasible()
    _emit(out, args)
    bad = thm.violated or not traces.ok or thm.haemers_margin < -1e-9
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_scan(args) -> int:
    source = args.enumerate if args.enumerate is not None else args.file
    want_rows = args.format == "csv" or args.rows is not None
    try:
        result = scan(source, args.alpha_grid, args.workers, want_rows)
    except (OSError, ValueError) as exc:
        print(f"scan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for lineno, msg in result.errors:
        print(f"line {lineno}: {msg}", file=sys.stderr)
    if args.rows is not None:
        with open(args.rows, "w") as fh:
            fh.write(rows_csv(result.rows))
    report_emit(result.summary, result.rows, args.format, args.output)
    return EXIT_VIOLATION if result.summary.violation_count else EXIT_OK


def cmd_optimize(args) -> int:
    prob = make_problem(args.n, args.p)
    x, value = minimize(prob, args.starts, args.seed)
    rep = kkt_residual(prob, x)
    try:
        w = mfcq_witness(prob, x)
        mfcq = "interior" if w is None else w
    except MFCQError as exc:
        mfcq = f"failed: {exc}"
    expected = prob.optimum_value()
    rel = abs(value - expected) / expected
    _emit({
        "n": prob.n, "p": prob.p, "xi": prob.xi, "point": x, "value": value,
        "expected": expected, "relative_error": rel, "kkt": rep.as_dict(), "mfcq_witness": mfcq,
    }, args)
    mfcq_ok = not (isinstance(mfcq, str) and mfcq.startswith("failed"))
    return EXIT_OK if rep.certified and rel <= 1e-6 and mfcq_ok else EXIT_VIOLATION


def _read_point(path: str) -> np.ndarray:
    with open(path) as fh:
        text = fh.read().replace(",", " ")
    return np.array([float(t) for t in text.split()])


def cmd_kkt(args) -> int:
    try:
        x = _read_point(args.point_file)
    except (OSError, ValueError) as exc:
        print(f"kkt: cannot read point: {exc}", file=sys.stderr)
        return EXIT_USAGE
    prob = make_problem(len(x), args.p)
    cv = evaluate_constraints(prob, x)
    out = {"n": prob.n, "p": prob.p, "point": x, "constraints": {
        "g": cv.g, "h": cv.h, "d": cv.d, "k": cv.k, "l": cv.l}, "feasible": cv.feasible()}
    status = EXIT_OK
    try:
        rep = kkt_residual(prob, x)
        out["kkt"] = rep.as_dict()
        w = mfcq_witness(prob, x)
        out["mfcq_witness"] = "interior" if w is None else w
        if not rep.certified:
            status = EXIT_VIOLATION
    except MFCQError as exc:
        out["mfcq_witness"] = f"failed: {exc}"
        status = EXIT_VIOLATION
    except ValueError as exc:
        out["error"] = str(exc)
        status = EXIT_VIOLATION
    _emit(out, args)
    return status


def cmd_bennett(args) -> int:
    grid = [k / 20 for k in range(21)]
    failures = []
    for i in range(args.count):
        tup = sample_bennett_premises(args.seed + i)
        if not bennett_check(*tup, p_grid=grid):
            failures.append({"seed": args.seed + i, "tuple": list(tup)})
    _emit({"tuples": args.count, "failures": len(failures), "failed": failures[:20]}, args)
    return EXIT_VIOLATION if failures else EXIT_OK


def cmd_roots(args) -> int:
    roots = positive_roots(args.p, args.A, args.mu, args.lam, args.x_max)
    _emit({"count": len(roots), "roots": roots}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha-grid", type=_grid_arg, default=alpha_grid(),
                        help="comma-separated alphas in (0,2) (default 0.1,...,1.9)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    p = _Parser(prog="seidelkit", description="Seidel energy verification toolkit")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, func, helptext in [
        ("spectrum", cmd_spectrum, "Seidel spectrum of a graph6 graph"),
        ("energy", cmd_energy, "Seidel energy and alpha-energies"),
        ("det", cmd_det, "exact Seidel determinant"),
        ("check", cmd_check, "all graph-level checks for one graph"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("graph6", help="graph in graph6 format")
        sp.set_defaults(func=func)

    sp = sub.add_parser("scan", parents=[common], help="exhaustive or file-driven verification")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--enumerate", type=int, metavar="N", help="all labeled graphs on N vertices")
    src.add_argument("--file", help="graph6 file, one graph per line")
    sp.add_argument("--rows", help="also write per-graph CSV rows to this path")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("optimize", parents=[common], help="multi-start power-sum minimization")
    sp.add_argument("n", type=int)
    sp.add_argument("p", type=float)
    sp.add_argument("--starts", type=int, default=32)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("kkt", parents=[common], help="KKT certificate at a point read from a file")
    sp.add_argument("point_file")
    sp.add_argument("--p", type=float, required=True)
    sp.set_defaults(func=cmd_kkt)

    sp = sub.add_parser("bennett", parents=[common], help="fuzz the two-point power comparison")
    sp.add_argument("count", type=int)
    sp.set_defaults(func=cmd_bennett)

    sp = sub.add_parser("roots", parents=[common], help="count positive roots of p x^p = A - mu x - 2 lam x^2")
    sp.add_argument("p", type=float)
    sp.add_argument("A", type=float)
    sp.add_argument("mu", type=float)
    sp.add_argument("lam", type=float, metavar="lambda")
    sp.add_argument("--x-max", type=float, default=None)
    sp.set_defaults(func=cmd_roots)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if hasattr(args, "graph6"):
        args.graph6_text = args.graph6
        try:
            args.graph = parse_graph6(args.graph6)
        except Graph6Error as exc:
            parser.error(f"bad graph6 {args.graph6!r}: {exc}")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
