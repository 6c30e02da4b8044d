"""graph6 reader/writer and the labeled-graph enumerator.

Only the plain graph6 variant is handled (no sparse6 / digraph6).  Vertex
counts up to 258047 are supported, i.e. the one-byte and the four-byte
size prefixes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

import numpy as np

from .graph_core import Graph, bits_to_mask, mask_to_bits, pair_count

HEADER = ">>graph6<<"
MAX_GRAPH6_N = 258047
MAX_ENUMERATE_N = 7

_SEXTET_WEIGHTS = np.array([32, 16, 8, 4, 2, 1], dtype=np.uint8)


class Graph6Error(ValueError):
    pass


def _encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])


def write_graph6(g: Graph) -> str:
    """Canonical graph6 encoding of ``g`` (no header, no newline)."""
    if g.n > MAX_GRAPH6_N:
        raise Graph6Error(f"n={g.n} exceeds the graph6 range ({MAX_GRAPH6_N})")
    npairs = pair_count(g.n)
    bits = mask_to_bits(g.mask, npairs)
    nbytes = -(-npairs // 6)
    padded = np.zeros(nbytes * 6, dtype=np.uint8)
    padded[:npairs] = bits
    body = padded.reshape(nbytes, 6) @ _SEXTET_WEIGHTS + 63
    return (_encode_n(g.n) + body.astype(np.uint8).tobytes()).decode("ascii")


def graph6_batch(bits: np.ndarray, n: int) -> list[str]:
    """graph6 strings for a ``(batch, n(n-1)/2)`` array of edge bits."""
    bits = np.asarray(bits, dtype=np.uint8)
    npairs = pair_count(n)
    nbytes = -(-npairs // 6)
    padded = np.zeros((bits.shape[0], nbytes * 6), dtype=np.uint8)
    padded[:, :npairs] = bits
    body = (padded.reshape(bits.shape[0], nbytes, 6) @ _SEXTET_WEIGHTS + 63).astype(np.uint8)
    prefix = _encode_n(n).decode("ascii")
    return [prefix + row.tobytes().decode("ascii") for row in body]


def parse_graph6(line: str | bytes) -> Graph:
    """Decode one graph6 line; an optional ``>>graph6<<`` header is skipped."""
    if isinstance(line, str):
        try:
            data = line.encode("ascii")
        except UnicodeEncodeError:
            raise Graph6Error("non-ASCII character in graph6 line") from None
    else:
        data = bytes(line)
    data = data.rstrip(b"\r\n")
    if data.startswith(HEADER.encode()):
        data = data[len(HEADER):]
    if not data:
        raise Graph6Error("empty graph6 line")
    raw = np.frombuffer(data, dtype=np.uint8)
    bad = np.flatnonzero((raw < 63) | (raw > 126))
    if bad.size:
        raise Graph6Error(f"byte {int(raw[bad[0]])} at offset {int(bad[0])} outside 63..126")
    vals = raw - 63
    if vals[0] != 63:
        n, offset = int(vals[0]), 1
    else:
        if len(vals) < 4:
            raise Graph6Error("truncated vertex-count prefix")
        if vals[1] == 63:
            raise Graph6Error("vertex counts above 258047 are not supported")
        n = int(vals[1]) << 12 | int(vals[2]) << 6 | int(vals[3])
        offset = 4
    if n == 0:
        raise Graph6Error("graphs with zero vertices are not supported")
    npairs = pair_count(n)
    nbytes = -(-npairs // 6)
    body = vals[offset:]
    if len(body) != nbytes:
        raise Graph6Error(f"expected {nbytes} data bytes for n={n}, got {len(body)}")
    bits = np.unpackbits(body[:, None], axis=1)[:, 2:].reshape(-1)
    if bits[npairs:].any():
        raise Graph6Error("nonzero padding bits")
    return Graph(n, bits_to_mask(bits[:npairs]))


def read_graph6_file(path: str | Path) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, text)`` for every non-blank line; the header line is dropped.

    Lines are returned unparsed so callers can decide how to treat errors.
    """
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        for lineno, text in enumerate(fh, start=1):
            text = text.strip()
            if lineno == 1 and text.startswith(HEADER):
                text = text[len(HEADER):]
            if text:
                yield lineno, text


def enumeration_size(n: int) -> int:
    _check_enumerable(n)
    return 1 << pair_count(n)


def _check_enumerable(n: int) -> None:
    if not 1 <= n <= MAX_ENUMERATE_N:
        raise ValueError(f"full enumeration supports 1 <= n <= {MAX_ENUMERATE_N}, got {n}")


def enumerate_labeled(n: int, start: int = 0, stop: int | None = None) -> Iterator[Graph]:
    """All labeled graphs on ``n`` vertices in increasing edge-mask order.

    ``start``/``stop`` restrict the scan to the half-open mask interval, so
    disjoint intervals can be processed independently.
    """
    total = enumeration_size(n)
    stop = total if stop is None else stop
    if not 0 <= start <= stop <= total:
        raise ValueError(f"mask interval [{start}, {stop}) not inside [0, {total})")
    for mask in range(start, stop):
        yield Graph(n, mask)
