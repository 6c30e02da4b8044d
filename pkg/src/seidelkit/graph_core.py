"""Labeled simple graphs, Seidel matrices and spectrum-preserving transforms.

A graph on ``n`` vertices is stored as a packed bitset over the unordered
vertex pairs.  Pair ``(i, j)`` with ``i < j`` lives at bit ``j*(j-1)/2 + i``,
which is the column order used by graph6, so edge masks, the enumeration
order and the graph6 body all agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

MAX_VERTICES = 2048


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, j: int) -> int:
    """Bit position of the unordered pair {i, j}."""
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column indices of every pair, in bit order."""
    cols = np.repeat(np.arange(n), np.arange(n))
    rows = np.concatenate([np.arange(j) for j in range(n)]) if n > 1 else np.zeros(0, int)
    return rows.astype(np.intp), cols.astype(np.intp)


def mask_to_bits(mask: int, nbits: int) -> np.ndarray:
    """Unpack the low ``nbits`` bits of ``mask`` (bit 0 first) into a uint8 array."""
    nbytes = (nbits + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:nbits]


def bits_to_mask(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``mask`` is the packed upper-triangular adjacency bitset.  Instances are
    immutable and hashable; equality is equality of labeled edge sets.
    """

    n: int
    mask: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        if self.mask < 0 or self.mask >> pair_count(self.n):
            raise ValueError("edge mask has bits outside the pair range")

    def has_edge(self, u: int, v: int) -> bool:
        _check_vertex(self.n, u)
        _check_vertex(self.n, v)
        if u == v:
            return False
        return bool(self.mask >> pair_index(u, v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = pair_arrays(self.n)
        on = np.flatnonzero(mask_to_bits(self.mask, pair_count(self.n)))
        return [(int(rows[k]), int(cols[k])) for k in on]

    @property
    def edge_count(self) -> int:
        return bin(self.mask).count("1")

    def adjacency_matrix(self) -> np.ndarray:
        """Symmetric boolean adjacency matrix."""
        a = np.zeros((self.n, self.n), dtype=bool)
        rows, cols = pair_arrays(self.n)
        bits = mask_to_bits(self.mask, pair_count(self.n)).astype(bool)
        a[rows, cols] = bits
        a[cols, rows] = bits
        return a

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def _check_vertex(n: int, v: int) -> None:
    if not 0 <= v < n:
        raise ValueError(f"vertex {v} out of range for n={n}")


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from an edge list; repeated edges are harmless."""
    mask = 0
    for u, v in edges:
        _check_vertex(n, u)
        _check_vertex(n, v)
        if u == v:
            raise ValueError(f"loop edge ({u}, {u}) not allowed in a simple graph")
        mask |= 1 << pair_index(u, v)
    return Graph(n, mask)


def graph_from_adjacency(a: np.ndarray) -> Graph:
    a = np.asarray(a, dtype=bool)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency matrix must be square")
    if np.any(np.diag(a)) or np.any(a != a.T):
        raise ValueError("adjacency matrix must be symmetric with empty diagonal")
    n = a.shape[0]
    rows, cols = pair_arrays(n)
    return Graph(n, bits_to_mask(a[rows, cols]))


def complete_graph(n: int) -> Graph:
    return Graph(n, (1 << pair_count(n)) - 1)


def empty_graph(n: int) -> Graph:
    return Graph(n, 0)


def seidel_matrix(g: Graph) -> np.ndarray:
    """Seidel matrix: 0 on the diagonal, -1 for adjacent pairs, +1 otherwise."""
    return seidel_matrices(np.asarray(mask_to_bits(g.mask, pair_count(g.n)))[None, :], g.n)[0]


def seidel_matrices(bits: np.ndarray, n: int) -> np.ndarray:
    """Stack of Seidel matrices from a ``(batch, n(n-1)/2)`` array of edge bits."""
    bits = np.asarray(bits)
    s = np.zeros((bits.shape[0], n, n), dtype=np.int64)
    rows, cols = pair_arrays(n)
    vals = 1 - 2 * bits.astype(np.int64)
    s[:, rows, cols] = vals
    s[:, cols, rows] = vals
    return s


def masks_to_bits(masks: np.ndarray, n: int) -> np.ndarray:
    """Edge bits for an array of small (< 2**63) masks, shape ``(len(masks), pairs)``."""
    masks = np.asarray(masks, dtype=np.uint64)
    shifts = np.arange(pair_count(n), dtype=np.uint64)
    return ((masks[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)


def switch(g: Graph, subset: Iterable[int]) -> Graph:
    """Seidel switching: toggle every pair with exactly one end in ``subset``."""
    side = np.zeros(g.n, dtype=bool)
    for v in subset:
        _check_vertex(g.n, v)
        side[v] = True
    rows, cols = pair_arrays(g.n)
    toggle = bits_to_mask(side[rows] != side[cols])
    return Graph(g.n, g.mask ^ toggle)


def complement(g: Graph) -> Graph:
    return Graph(g.n, g.mask ^ ((1 << pair_count(g.n)) - 1))


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    for j in range(n):
        for i in range(j):
            yield i, j
