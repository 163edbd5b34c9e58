"""Ego networks, Burt's constraint, m-slices and tie-weight tabulation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .centrality import betweenness_all
from .netcore import WeightedNetwork, induced_subgraph
from .paths import geodesic_summary
from .stats import summarize


@dataclass(frozen=True)
class EgoStats:
    vertices: int
    neighbors: int
    edges: int
    density: float
    diameter: int | None
    diameter_witness: tuple[str, str] | None
    average_geodesic: float | None
    average_degree: float
    betweenness_centralization: float | None


@dataclass(frozen=True)
class EgoNetwork:
    ego: str
    network: WeightedNetwork
    stats: EgoStats
    include_ego: bool = True
    isolated: bool = False


def ego_network(
    net: WeightedNetwork,
    ego,
    include_ego: bool = True,
    betweenness: bool = True,
) -> EgoNetwork:
    """Ego, its direct neighbours and every tie among them.

    With ``include_ego=False`` the statistics describe the neighbourhood
    alone (ego and its ties removed), which is how the published Book-Crossing
    ego table was computed: its diameter of 8 cannot arise while ego, adjacent
    to everyone, is still present.
    """
    i = net.index_of(ego)
    nbrs = net.neighbors(i)
    members = np.append(nbrs, i) if include_ego else nbrs
    sub = induced_subgraph(net, members)
    summary = summarize(sub)
    geo = geodesic_summary(sub) if sub.edge_count else None
    bc = betweenness_all(sub).centralization if betweenness and sub.dimension > 2 else None
    stats = EgoStats(
        vertices=sub.dimension,
        neighbors=len(nbrs),
        edges=sub.edge_count,
        density=summary.density,
        diameter=geo.diameter if geo else None,
        diameter_witness=geo.witness if geo else None,
        average_geodesic=geo.average if geo else None,
        average_degree=summary.average_degree,
        betweenness_centralization=bc,
    )
    return EgoNetwork(str(ego), sub, stats, include_ego, isolated=len(nbrs) == 0)


def dyadic_constraint(net: WeightedNetwork, i, j) -> float:
    """``(p_ij + sum_q p_iq p_qj) ** 2`` for adjacent external IDs ``i``, ``j``."""
    a, b = net.index_of(i), net.index_of(j)
    if a == b:
        raise ValueError("dyadic constraint needs two distinct vertices")
    if not net.weight(a, b):
        raise ValueError(f"{i} and {j} are not adjacent")
    indptr, nbrs, w = net.csr

    def strength(v):
        return float(w[indptr[v] : indptr[v + 1]].sum())

    def p(x, y):
        return net.weight(x, y) / strength(x)

    indirect = sum(p(a, q) * p(q, b) for q in nbrs[indptr[a] : indptr[a + 1]].tolist() if q != b)
    return (p(a, b) + indirect) ** 2


@dataclass(frozen=True, eq=False)
class ConstraintVector:
    labels: tuple[str, ...]
    values: np.ndarray  # NaN for isolates

    def value(self, external_id) -> float:
        return float(self.values[self.labels.index(str(external_id))])

    def extremes(self) -> tuple[tuple[str, float], tuple[str, float]]:
        """(highest, lowest) over vertices with at least one tie.

        Ties go to the smallest external ID.
        """
        ok = np.flatnonzero(~np.isnan(self.values))
        if len(ok) == 0:
            raise ValueError("no vertex has a tie")
        vals = self.values[ok]
        labels = [self.labels[i] for i in ok.tolist()]
        hi = min(range(len(ok)), key=lambda k: (-vals[k], labels[k]))
        lo = min(range(len(ok)), key=lambda k: (vals[k], labels[k]))
        return (labels[hi], float(vals[hi])), (labels[lo], float(vals[lo]))


def aggregate_constraint_all(net: WeightedNetwork) -> ConstraintVector:
    indptr, nbrs, w = net.csr
    values = _kernels.aggregate_constraint(indptr, nbrs, w.astype(np.float64))
    return ConstraintVector(net.labels, values)


@dataclass(frozen=True, eq=False)
class MSliceAssignment:
    labels: tuple[str, ...]
    values: np.ndarray  # m-value per vertex

    def frequencies(self) -> dict[int, int]:
        m, counts = np.unique(self.values, return_counts=True)
        return dict(zip(m.tolist(), counts.tolist()))

    def members(self, m: int) -> list[str]:
        return sorted(self.labels[i] for i in np.flatnonzero(self.values == m).tolist())

    def extremes(self, count: int = 5, max_members: int = 2) -> tuple[list, list]:
        """Lowest and highest ``count`` m-values as (m, size, members) rows.

        Members are listed only for slices of at most ``max_members`` vertices.
        """
        freq = sorted(self.frequencies().items())

        def row(m, c):
            return (m, c, self.members(m) if c <= max_members else [])

        low = [row(m, c) for m, c in freq[:count]]
        high = [row(m, c) for m, c in reversed(freq[-count:])]
        return low, high


def mslice_assign(net: WeightedNetwork) -> MSliceAssignment:
    """m-value of each vertex: the largest weight among its ties, 0 if none."""
    values = np.zeros(net.dimension, np.int64)
    np.maximum.at(values, net.u, net.weights)
    np.maximum.at(values, net.v, net.weights)
    return MSliceAssignment(net.labels, values)


def mslice_extract(net: WeightedNetwork, m: int, drop_isolates: bool = False) -> WeightedNetwork:
    """Keep the ties of weight >= m."""
    if m < 0:
        raise ValueError("m must be non-negative")
    keep = net.weights >= m
    sub = WeightedNetwork(net.labels, net.u[keep], net.v[keep], net.weights[keep])
    if drop_isolates:
        active = np.flatnonzero(sub.degrees() > 0)
        sub = induced_subgraph(sub, active)
    return sub


@dataclass(frozen=True)
class WeightBin:
    low: float | None  # exclusive; None for the exact-minimum row
    high: float
    frequency: int


@dataclass(frozen=True)
class TieWeightTable:
    minimum: int
    maximum: int
    rows: list[WeightBin]

    @property
    def total(self) -> int:
        return sum(r.frequency for r in self.rows)


def tie_weight_table(net: WeightedNetwork, bins: int = 3) -> TieWeightTable:
    """Exact-minimum row followed by ``bins`` equal-width bins over (min, max]."""
    if net.edge_count == 0:
        raise ValueError("tie weight table needs at least one edge")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    w = net.weights
    lo, hi = int(w.min()), int(w.max())
    rows = [WeightBin(None, lo, int((w == lo).sum()))]
    span = hi - lo
    if span == 0:
        return TieWeightTable(lo, hi, rows)
    above = w[w > lo] - lo
    # bin k (1-based) holds (k-1)*span < (w-lo)*bins <= k*span, in integers
    k = -((-above * bins) // span)
    counts = np.bincount(k, minlength=bins + 1)[1:]
    for b in range(bins):
        rows.append(WeightBin(lo + b * span / bins, lo + (b + 1) * span / bins, int(counts[b])))
    return TieWeightTable(lo, hi, rows)
