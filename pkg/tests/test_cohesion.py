import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bxsna.cohesion import (
    aggregate_constraint_all,
    dyadic_constraint,
    ego_network,
    mslice_assign,
    mslice_extract,
    tie_weight_table,
)
from bxsna.netcore import WeightedNetwork

from oracles import constraint_bruteforce, random_weighted


def star(k, weight=1):
    return WeightedNetwork(tuple(map(str, range(k + 1))), [0] * k, list(range(1, k + 1)), [weight] * k)


def test_toy_ego(toy_projected):
    eg = ego_network(toy_projected, "u2")
    assert eg.network.labels == ("u1", "u2", "u3")
    assert eg.stats.neighbors == 2 and eg.stats.edges == 2
    assert round(eg.stats.density, 4) == 0.6667


def test_ego_without_self(toy_projected):
    eg = ego_network(toy_projected, "u2", include_ego=False)
    assert eg.network.labels == ("u1", "u3") and eg.stats.edges == 0


def test_isolated_ego():
    net = WeightedNetwork(("a", "b", "c"), [0], [1], [1])
    eg = ego_network(net, "c")
    assert eg.isolated and eg.stats.vertices == 1 and eg.stats.diameter is None


def test_ego_of_complete_graph():
    pairs = list(itertools.combinations(range(5), 2))
    net = WeightedNetwork(tuple("abcde"), [a for a, _ in pairs], [b for _, b in pairs], [2] * 10)
    assert ego_network(net, "c").stats.density == 1.0


def test_ego_members_adjacent():
    net = random_weighted(np.random.default_rng(1), 40)
    hub = net.labels[int(np.argmax(net.degrees()))]
    eg = ego_network(net, hub, betweenness=False)
    i = net.index_of(hub)
    for label in eg.network.labels:
        if label != hub:
            assert net.weight(i, net.index_of(label)) > 0


def test_toy_constraint(toy_projected):
    con = aggregate_constraint_all(toy_projected)
    assert con.value("u1") == 1.0
    assert con.value("u2") == pytest.approx((56 / 116) ** 2 + (60 / 116) ** 2, abs=1e-15)
    assert dyadic_constraint(toy_projected, "u2", "u1") == pytest.approx((56 / 116) ** 2)


def test_pendant_constraint():
    net = WeightedNetwork(("a", "b"), [0], [1], [9])
    assert dyadic_constraint(net, "a", "b") == 1.0
    assert aggregate_constraint_all(net).value("a") == 1.0


def test_dyadic_errors(toy_projected):
    with pytest.raises(ValueError):
        dyadic_constraint(toy_projected, "u1", "u1")
    with pytest.raises(ValueError):
        dyadic_constraint(toy_projected, "u1", "u3")


@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_star_center(k):
    assert aggregate_constraint_all(star(k, weight=3)).values[0] == pytest.approx(1 / k, abs=1e-15)


def test_isolates_excluded_from_extremes():
    net = WeightedNetwork(("a", "b", "c", "d"), [0, 0], [1, 2], [1, 3])
    con = aggregate_constraint_all(net)
    assert np.isnan(con.value("d"))
    (hi_id, _), (lo_id, lo) = con.extremes()
    assert hi_id in ("b", "c") and lo_id == "a"


def test_toy_mslice(toy_projected):
    ms = mslice_assign(toy_projected)
    assert ms.values.tolist() == [56, 60, 60]
    sub = mslice_extract(toy_projected, 60)
    assert list(sub.edges()) == [("u2", "u3", 60)] and sub.degrees()[0] == 0
    assert mslice_extract(toy_projected, 60, drop_isolates=True).labels == ("u2", "u3")
    with pytest.raises(ValueError):
        mslice_extract(toy_projected, -1)


def test_mslice_extremes():
    net = WeightedNetwork(tuple("abcdef"), [0, 2, 3], [1, 3, 4], [9, 5, 5])
    low, high = mslice_assign(net).extremes(2)
    assert low == [(0, 1, ["f"]), (5, 3, [])]
    assert high == [(9, 2, ["a", "b"]), (5, 3, [])]


def test_toy_tie_weights(toy_projected):
    tw = tie_weight_table(toy_projected, bins=2)
    assert [(r.low, r.high, r.frequency) for r in tw.rows] == [(None, 56, 1), (56, 58, 0), (58, 60, 1)]
    assert tw.total == 2


def test_uniform_tie_weights():
    tw = tie_weight_table(star(4, weight=7))
    assert len(tw.rows) == 1 and tw.rows[0].frequency == 4


def test_tie_weights_need_edges():
    with pytest.raises(ValueError):
        tie_weight_table(WeightedNetwork(("a",), [], [], []))


def test_tie_bin_edges_exact():
    # boundaries 36 + k * 25303 / 3 are not integers; 8470 and 8471 fall on either side
    net = WeightedNetwork(tuple("abcdefgh"), [0, 1, 2, 3], [4, 5, 6, 7], [36, 8470, 8471, 25339])
    tw = tie_weight_table(net, 3)
    assert [r.frequency for r in tw.rows] == [1, 1, 1, 1]
    assert f"{tw.rows[1].high:.4f}" == "8470.3333" and f"{tw.rows[2].high:.4f}" == "16904.6667"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_constraint_matches_triple_loop(seed):
    net = random_weighted(np.random.default_rng(seed), 20)
    got = aggregate_constraint_all(net).values
    for g, want in zip(got.tolist(), constraint_bruteforce(net)):
        if want is None:
            assert np.isnan(g)
        else:
            assert abs(g - want) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_aggregate_is_sum_of_dyadic(seed):
    net = random_weighted(np.random.default_rng(seed), 15)
    con = aggregate_constraint_all(net)
    for i in range(net.dimension):
        nbrs = net.neighbors(i).tolist()
        if nbrs:
            total = sum(dyadic_constraint(net, net.labels[i], net.labels[j]) for j in nbrs)
            assert con.values[i] == pytest.approx(total, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mslice_nesting_and_totals(seed):
    rng = np.random.default_rng(seed)
    net = random_weighted(rng, 40)
    ms = mslice_assign(net)
    assert sum(ms.frequencies().values()) == net.dimension
    m1, m2 = sorted(rng.integers(0, 60, 2).tolist())
    e1 = set(mslice_extract(net, m1).edges())
    e2 = set(mslice_extract(net, m2).edges())
    assert e2 <= e1
    for i in range(net.dimension):
        incident = net.csr[2][net.csr[0][i] : net.csr[0][i + 1]]
        assert ms.values[i] == (incident.max() if len(incident) else 0)
