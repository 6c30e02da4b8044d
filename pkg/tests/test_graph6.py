import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from seidelkit.graph6_io import (
    Graph6Error,
    enumerate_labeled,
    enumeration_size,
    graph6_batch,
    parse_graph6,
    read_graph6_file,
    write_graph6,
)
from seidelkit.graph_core import Graph, complete_graph, empty_graph, graph_from_edges, masks_to_bits, pair_count

FIXTURES = {
    "k4": complete_graph(4),
    "empty4": empty_graph(4),
    "edge2": graph_from_edges(2, [(0, 1)]),
    "p3": graph_from_edges(3, [(0, 1), (1, 2)]),
    "k63": complete_graph(63),
}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_golden_files(golden, name):
    text = (golden / f"{name}.g6").read_bytes().decode().strip()
    assert parse_graph6(text) == FIXTURES[name]
    assert write_graph6(FIXTURES[name]) == text


def test_petersen_golden(golden):
    text = (golden / "petersen.g6").read_text().strip()
    g = parse_graph6(text)
    ref = nx.petersen_graph()
    assert sorted(g.edges()) == sorted(tuple(sorted(e)) for e in ref.edges())
    assert write_graph6(g) == text


def test_byte_examples():
    assert parse_graph6("C~") == complete_graph(4)
    assert parse_graph6("C?") == empty_graph(4)
    assert parse_graph6("A_") == graph_from_edges(2, [(0, 1)])
    assert write_graph6(complete_graph(4)) == "C~"
    assert write_graph6(empty_graph(4)) == "C?"


def test_header_and_newline_are_skipped():
    assert parse_graph6(">>graph6<<C~\n") == complete_graph(4)
    assert parse_graph6(b"C~\r\n") == complete_graph(4)


@pytest.mark.parametrize("bad", ["", "C", "C~~", "C!", "A`", "Bé", "~~???", "?"])
def test_malformed_lines_raise(bad):
    with pytest.raises(Graph6Error):
        parse_graph6(bad)


def test_nonzero_padding_is_rejected():
    # 'A' has one data bit; '`' = 97 sets a padding bit
    with pytest.raises(Graph6Error, match="padding"):
        parse_graph6("A`")


def _nx_g6(g: Graph) -> str:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return nx.to_graph6_bytes(h, header=False).decode().strip()


def test_matches_networkx_exhaustively_small():
    for n in range(1, 6):
        for g in enumerate_labeled(n):
            assert write_graph6(g) == _nx_g6(g)


def test_matches_networkx_random_large():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.choice([7, 30, 62, 63, 64, 100, 200])
        g = Graph(n, rng.getrandbits(pair_count(n)))
        assert write_graph6(g) == _nx_g6(g)


def test_round_trip_exhaustive_up_to_six():
    for n in range(1, 7):
        for g in enumerate_labeled(n):
            assert parse_graph6(write_graph6(g)) == g


def test_batch_encoder_agrees():
    n = 6
    masks = np.arange(0, 1 << pair_count(n), 97, dtype=np.uint64)
    names = graph6_batch(masks_to_bits(masks, n), n)
    assert names == [write_graph6(Graph(n, int(m))) for m in masks]


@given(st.integers(1, 120), st.data())
def test_round_trip_property(n, data):
    g = Graph(n, data.draw(st.integers(0, (1 << pair_count(n)) - 1)))
    assert parse_graph6(write_graph6(g)) == g


def test_enumeration_counts():
    assert [enumeration_size(n) for n in (1, 3, 4)] == [1, 8, 64]
    assert len(list(enumerate_labeled(4))) == 64
    assert [g.mask for g in enumerate_labeled(3, 2, 5)] == [2, 3, 4]
    with pytest.raises(ValueError):
        enumeration_size(8)
    with pytest.raises(ValueError):
        list(enumerate_labeled(3, 5, 9))


def test_read_file_keeps_line_numbers(golden):
    lines = list(read_graph6_file(golden / "mixed.g6"))
    assert [ln for ln, _ in lines] == [1, 2, 4, 5, 6, 7]
    assert lines[0][1] == "C~"
