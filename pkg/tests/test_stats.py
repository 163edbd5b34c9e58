import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bxsna.ingest import BookRecord, BookTable, UserRecord, UserTable
from bxsna.netcore import WeightedNetwork
from bxsna.stats import degree_centralization, degree_report, join_attributes, summarize

from oracles import random_bipartite, random_weighted


def complete(n):
    pairs = list(itertools.combinations(range(n), 2))
    return WeightedNetwork(tuple(map(str, range(n))), [a for a, _ in pairs], [b for _, b in pairs], [1] * len(pairs))


def star(k):
    return WeightedNetwork(tuple(map(str, range(k + 1))), [0] * k, list(range(1, k + 1)), [1] * k)


def test_complete_k4():
    s = summarize(complete(4))
    assert s.density == 1.0 and s.average_degree == 3.0


def test_tiny_density_flag():
    s = summarize(WeightedNetwork(("a",), [], [], []))
    assert s.density == 0.0 and not s.density_defined


def test_toy_two_mode(toy_bipartite):
    s = summarize(toy_bipartite)
    assert s.density == pytest.approx(4 / 20)
    assert s.average_degree == pytest.approx(8 / 5)


def test_star_centralization():
    assert degree_report(star(4), "all").centralization == 1.0


def test_complete_and_cycle_centralization():
    assert degree_report(complete(6), "all").centralization == 0.0
    ring = WeightedNetwork(tuple("abcde"), [0, 1, 2, 3, 0], [1, 2, 3, 4, 4], [1] * 5)
    assert degree_report(ring, "all").centralization == 0.0


def test_top_k_ties_and_truncation(toy_bipartite):
    rep = degree_report(toy_bipartite, "in", k=99)
    assert len(rep.top) == 2  # books only
    assert [e.external_id for e in rep.top[:2]] == ["b1", "b2"]
    assert rep.top[0].normalized == pytest.approx(2 / 4)


def test_out_report_toy(toy_bipartite):
    rep = degree_report(toy_bipartite, "out", 3)
    assert rep.highest == 2 and rep.highest_frequency == 1
    assert rep.lowest_nonzero == 1 and rep.lowest_nonzero_frequency == 2
    assert rep.zero_count == 2
    assert rep.centralization == pytest.approx((5 * 2 - 4) / 16)


def test_two_mode_needs_direction(toy_bipartite):
    with pytest.raises(ValueError):
        degree_report(toy_bipartite, "all")


def test_join_attributes(toy_bipartite):
    users = UserTable({"u2": UserRecord("u2", None, None), "u1": UserRecord("u1", "x, y, usa", 52)})
    books = BookTable({"b1": BookRecord("b1", "The Lovely Bones", "Alice Sebold")})
    out = join_attributes(degree_report(toy_bipartite, "out", 3), users, books).top
    assert out[0].external_id == "u2" and out[0].attributes["age"] == "Null"
    assert out[1].attributes == {"age": 52, "location": "x, y, usa", "country": "usa"}
    assert out[2].attributes["country"] == "Null"
    inn = join_attributes(degree_report(toy_bipartite, "in", 2), users, books).top
    assert inn[0].attributes["title"] == "The Lovely Bones"
    assert inn[1].attributes == {"title": "Null", "author": "Null"}


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_summary_matches_brute_force(seed):
    net = random_weighted(np.random.default_rng(seed), 50)
    n = net.dimension
    edges = {frozenset(e) for e in zip(net.u.tolist(), net.v.tolist())}
    s = summarize(net)
    if n >= 2:
        assert s.density == pytest.approx(len(edges) / (n * (n - 1) / 2))
    assert s.average_degree == pytest.approx(2 * len(edges) / n)
    rep = degree_report(net, "all")
    assert sum(d * c for d, c in rep.distribution.items()) == 2 * net.edge_count
    assert sum(rep.distribution.values()) == n
    assert 0.0 <= rep.centralization <= 1.0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_directed_distribution_sums(seed):
    net = random_bipartite(np.random.default_rng(seed))
    for direction in ("in", "out"):
        rep = degree_report(net, direction)
        assert sum(d * c for d, c in rep.distribution.items()) == net.arc_count
        assert 0.0 <= rep.centralization <= 1.0


def test_centralization_formula_inputs():
    # two-vertex undirected networks have no (n-1)(n-2) denominator
    assert degree_centralization(np.array([1, 1]), directed=False) == 0.0
