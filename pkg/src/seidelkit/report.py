"""CSV and JSON serialization of scan results."""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Iterable

from .scan import GraphRow, ScanSummary

CSV_COLUMNS = ("graph6", "n", "det", "energy", "gate", "min_alpha_margin", "lemma31_ok")
SIG_DIGITS = 12
# below this magnitude a printed float is rounding noise around an exact zero
ZERO_SNAP = 5e-13


def format_float(x: float) -> str:
    """Twelve significant digits, trailing zeros kept; exact zero as 0.000000000000."""
    if abs(x) < ZERO_SNAP:
        return "0." + "0" * SIG_DIGITS
    return f"{x:#.{SIG_DIGITS}g}"


def round_float(x: float | None) -> float | None:
    if x is None:
        return None
    return 0.0 if abs(x) < ZERO_SNAP else float(f"{x:.{SIG_DIGITS}g}")


def csv_row(row: GraphRow) -> list[str]:
    return [
        row.graph6, str(row.n), str(row.det), format_float(row.energy),
        str(int(row.gate)), format_float(row.min_alpha_margin), str(int(row.lemma31_ok)),
    ]


def summary_json(summary: ScanSummary) -> str:
    d = {k: round_float(v) if isinstance(v, float) else v for k, v in summary.to_dict().items()}
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def read_summary(path: str | Path) -> ScanSummary:
    with open(path) as fh:
        return ScanSummary.from_dict(json.load(fh))


def rows_csv(rows: Iterable[GraphRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow(csv_row(row))
    return buf.getvalue()


def report_emit(summary: ScanSummary, rows: Iterable[GraphRow] | None, fmt: str,
                path: str | Path | None = None) -> None:
    """Write rows as CSV or the summary as JSON; ``path=None`` writes to stdout."""
    if fmt == "csv":
        text = rows_csv(rows or [])
    elif fmt == "json":
        text = summary_json(summary)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected csv or json")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
