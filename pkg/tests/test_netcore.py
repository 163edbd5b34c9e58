import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bxsna.ingest import RatingTable
from bxsna.netcore import (
    BipartiteNetwork,
    UnknownVertexError,
    WeightedNetwork,
    build_bipartite,
    degree,
    induced_subgraph,
)
from bxsna.pajek import PajekFormatError, export_clu, export_pajek, format_net, import_clu, import_pajek, parse_net

from oracles import random_bipartite, random_weighted


def test_toy_counts(toy_bipartite):
    assert toy_bipartite.dimension == 5
    assert toy_bipartite.arc_count == 4
    assert degree(toy_bipartite, "u2", "out") == 2
    assert degree(toy_bipartite, "b1", "in") == 2
    assert degree(toy_bipartite, "b1", "out") == 0


def test_vertex_order(toy_bipartite):
    assert toy_bipartite.labels == ("u1", "u2", "u3", "b1", "b2")
    assert toy_bipartite.n_users == 3


def test_users_sorted_as_strings():
    net = build_bipartite(RatingTable.from_triples([("2", "B", 1), ("11676", "A", 1)]))
    assert net.labels[:2] == ("11676", "2")


def test_empty():
    net = build_bipartite(RatingTable.from_triples([]))
    assert net.dimension == 0 and net.arc_count == 0


def test_unknown_vertex(toy_bipartite):
    with pytest.raises(UnknownVertexError, match="nobody"):
        degree(toy_bipartite, "nobody")


def test_rejects_bad_structure():
    with pytest.raises(ValueError):
        WeightedNetwork(("a", "b"), [0], [0], [1])
    with pytest.raises(ValueError):
        WeightedNetwork(("a", "b"), [0, 1], [1, 0], [1, 2])
    with pytest.raises(ValueError):
        WeightedNetwork(("a", "b"), [0], [1], [0])
    with pytest.raises(ValueError):
        BipartiteNetwork(("u", "b"), 1, [1], [0], [1])


def test_weight_lookup(toy_projected):
    i = toy_projected.index_of
    assert toy_projected.weight(i("u1"), i("u2")) == 56
    assert toy_projected.weight(i("u3"), i("u2")) == 60
    assert toy_projected.weight(i("u1"), i("u3")) == 0


def test_induced_subgraph(toy_projected):
    sub = induced_subgraph(toy_projected, [1, 2])
    assert sub.labels == ("u2", "u3")
    assert list(sub.edges()) == [("u2", "u3", 60)]


def test_toy_pajek_text(toy_projected):
    text = format_net(toy_projected)
    assert "*Vertices 3" in text and "*Edges" in text
    assert "1 2 56" in text.splitlines()


def test_empty_pajek(tmp_path):
    net = WeightedNetwork((), [], [], [])
    export_pajek(net, tmp_path / "e.net")
    assert (tmp_path / "e.net").read_text().startswith("*Vertices 0")
    assert import_pajek(tmp_path / "e.net").dimension == 0


def test_unit_weights_omitted():
    net = WeightedNetwork(("a", "b"), [0], [1], [1])
    assert format_net(net).splitlines()[-1] == "1 2"


def test_label_escaping_roundtrip():
    net = WeightedNetwork(('a"b', "c\\d", "e f"), [0, 1], [1, 2], [3, 1])
    back = parse_net(format_net(net))
    assert back.labels == net.labels


@pytest.mark.parametrize(
    "text,line",
    [
        ("*Vertices x\n", 1),
        ("*Vertices 2\n1 \"a\"\n2 \"b\"\n*Edges\n1 3\n", 5),
        ("*Vertices 2\n*Matrix\n", 2),
        ("*Vertices 2\n*Edges\n1 two\n", 3),
    ],
)
def test_pajek_errors_have_line_numbers(text, line):
    with pytest.raises(PajekFormatError) as err:
        parse_net(text)
    assert err.value.lineno == line


def test_clu_roundtrip(tmp_path):
    export_clu([0, 36, 42], tmp_path / "m.clu")
    assert import_clu(tmp_path / "m.clu").tolist() == [0, 36, 42]
    lines = (tmp_path / "m.clu").read_text().splitlines()
    assert lines[0] == "*Vertices 3" and len(lines) == 4


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_two_mode_degree_sums(seed):
    net = random_bipartite(np.random.default_rng(seed))
    assert net.out_degrees().sum() == net.in_degrees().sum() == net.arc_count
    assert sorted(net.index_of(x) for x in net.labels) == list(range(net.dimension))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_one_mode_handshake(seed):
    net = random_weighted(np.random.default_rng(seed), 30)
    assert net.degrees().sum() == 2 * net.edge_count


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bipartite_roundtrip(seed):
    net = random_bipartite(np.random.default_rng(seed))
    back = parse_net(format_net(net))
    assert isinstance(back, BipartiteNetwork)
    assert back.labels == net.labels and back.n_users == net.n_users
    assert np.array_equal(back.src, net.src) and np.array_equal(back.dst, net.dst)
    assert np.array_equal(back.values, net.values)
