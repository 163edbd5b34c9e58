import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bxsna.ingest import RatingTable
from bxsna.netcore import build_bipartite
from bxsna.projection import RULES, ProjectionRule, project

from oracles import project_bruteforce, random_bipartite


def as_dict(net):
    return {(a, b): w for a, b, w in zip(net.u.tolist(), net.v.tolist(), net.weights.tolist())}


def test_toy_products(toy_projected):
    assert list(toy_projected.edges()) == [("u1", "u2", 56), ("u2", "u3", 60)]


def test_toy_count_shared(toy_bipartite):
    net = project(toy_bipartite, ProjectionRule("user", "count_shared"))
    assert as_dict(net) == {(0, 1): 1, (1, 2): 1}


def test_book_side(toy_bipartite):
    net = project(toy_bipartite, ProjectionRule("book", "sum_of_minima"))
    assert net.labels == ("b1", "b2")
    assert list(net.edges()) == [("b1", "b2", 6)]


def test_isolates_kept():
    table = RatingTable.from_triples([("a", "x", 7), ("b", "x", 7), ("c", "y", 9)])
    net = project(build_bipartite(table))
    assert net.dimension == 3
    assert net.degrees().tolist() == [1, 1, 0]


def test_minimum_preference_weight():
    table = RatingTable.from_triples([("a", "x", 6), ("b", "x", 6)])
    assert project(build_bipartite(table)).weights.tolist() == [36]


def test_bad_rule():
    with pytest.raises(ValueError):
        ProjectionRule("user", "jaccard")
    with pytest.raises(ValueError):
        ProjectionRule("reader", "count_shared")


def test_zero_ratings_need_count_rule():
    table = RatingTable.from_triples([("a", "x", 0), ("b", "x", 4)])
    with pytest.raises(ValueError):
        project(build_bipartite(table))
    assert project(build_bipartite(table), ProjectionRule("user", "count_shared")).edge_count == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(sorted(RULES)), st.sampled_from(["user", "book"]))
def test_matches_double_loop(seed, rule, side):
    net = random_bipartite(np.random.default_rng(seed))
    got = project(net, ProjectionRule(side, rule), row_chunk=3)
    assert as_dict(got) == project_bruteforce(net, rule, side)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_weight_bounds(seed):
    net = random_bipartite(np.random.default_rng(seed), low=6, high=10)
    counts = project(net, ProjectionRule("user", "count_shared"))
    prods = project(net, ProjectionRule("user", "sum_of_products"))
    out = net.out_degrees()
    for (a, b), shared in as_dict(counts).items():
        assert shared <= min(out[a], out[b])
        w = prods.weight(a, b)
        assert prods.weight(b, a) == w
        assert 36 * shared <= w <= 100 * shared


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_single_rater_books_give_isolates(seed):
    net = random_bipartite(np.random.default_rng(seed))
    proj = project(net)
    in_deg = net.in_degrees()
    indptr, books, _ = net.out_csr
    for u in range(net.n_users):
        if np.all(in_deg[books[indptr[u] : indptr[u + 1]]] <= 1):
            assert proj.degrees()[u] == 0
