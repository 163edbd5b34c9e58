"""Weak components and hop-count geodesics.

Arc direction is ignored throughout and edge weights never enter a
distance: every line has length one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .netcore import Network

Progress = Callable[[int, int], None]


@dataclass(frozen=True)
class ComponentPartition:
    labels: np.ndarray
    sizes: np.ndarray  # descending
    min_size: int = 1

    @property
    def dimension(self) -> int:
        return int(self.sizes.sum())

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def count_min_size(self) -> int:
        """Components with at least ``min_size`` vertices."""
        return int((self.sizes >= self.min_size).sum())

    @property
    def singletons(self) -> int:
        return int((self.sizes == 1).sum())

    @property
    def giant(self) -> int:
        return int(self.sizes[0]) if len(self.sizes) else 0

    @property
    def giant_share(self) -> float:
        n = self.dimension
        return self.giant / n if n else 0.0

    def reachable_ordered_pairs(self) -> int:
        s = self.sizes.astype(object)
        return int(sum(x * (x - 1) for x in s))


def weak_components(net: Network, min_size: int = 1) -> ComponentPartition:
    n = net.dimension
    if n == 0:
        return ComponentPartition(np.zeros(0, np.int64), np.zeros(0, np.int64), min_size)
    indptr, indices = net.undirected_csr
    graph = csr_matrix((np.ones(len(indices), np.int8), indices, indptr), shape=(n, n))
    _, raw = connected_components(graph, directed=False)
    sizes = np.bincount(raw)
    # relabel so that component 0 is the largest; ties by first vertex
    first = np.full(len(sizes), n, np.int64)
    np.minimum.at(first, raw, np.arange(n))
    order = np.lexsort((first, -sizes))
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return ComponentPartition(relabel[raw].astype(np.int64), sizes[order].astype(np.int64), min_size)


@dataclass(frozen=True)
class DistanceHistogram:
    source: str
    counts: dict[int, int]
    unreachable: int

    @property
    def reachable(self) -> int:
        return sum(self.counts.values())

    @property
    def total(self) -> int:
        return self.reachable + self.unreachable

    def rows(self) -> list[tuple[str, int]]:
        """Rows laid out as distance, ..., Sum, Unknown, Total."""
        out = [(str(d), c) for d, c in sorted(self.counts.items())]
        out += [("Sum", self.reachable), ("Unknown", self.unreachable), ("Total", self.total)]
        return out


def distances(net: Network, source) -> np.ndarray:
    """Hop distances from ``source`` (external ID); -1 marks unreachable."""
    s = net.index_of(source)
    indptr, indices = net.undirected_csr
    return _kernels.bfs_distances(indptr, indices, s)


def distances_from(net: Network, source) -> DistanceHistogram:
    dist = distances(net, source)
    reached = dist[dist >= 0]
    hist = np.bincount(reached)
    counts = {d: int(c) for d, c in enumerate(hist.tolist()) if c}
    return DistanceHistogram(str(source), counts, int((dist < 0).sum()))


@dataclass(frozen=True)
class SweepResult:
    """Per-vertex output of an all-sources BFS sweep."""

    reach: np.ndarray
    dist_sum: np.ndarray
    ecc: np.ndarray
    witness_a: np.ndarray
    witness_b: np.ndarray


def bfs_sweep(
    net: Network,
    sources: np.ndarray | None = None,
    block: int = 2048,
    progress: Progress | None = None,
) -> SweepResult:
    """BFS from each source, in the given order, ``block`` sources at a time."""
    indptr, indices = net.undirected_csr
    n = net.dimension
    if sources is None:
        sources = np.arange(n, dtype=np.int64)
    sources = np.asarray(sources, dtype=np.int64)
    rank = net.label_rank
    parts = []
    for start in range(0, len(sources), block):
        parts.append(_kernels.bfs_sweep(indptr, indices, sources[start : start + block], rank))
        if progress:
            progress(min(start + block, len(sources)), len(sources))
    if not parts:
        z = np.zeros(0, np.int64)
        return SweepResult(z, z, z, z, z)
    return SweepResult(*(np.concatenate(cols) for cols in zip(*parts)))


@dataclass(frozen=True)
class GeodesicSummary:
    diameter: int | None
    witness: tuple[str, str] | None
    average: float | None
    reachable_pairs: int
    unreachable_pairs: int
    sampled: bool = False

    @property
    def defined(self) -> bool:
        return self.diameter is not None


def summarize_sweep(net: Network, sweep: SweepResult, sampled: bool = False) -> GeodesicSummary:
    n = net.dimension
    reach = int(sweep.reach.sum())
    total = int(sweep.dist_sum.sum())
    if sampled and len(sweep.reach):
        scale = n / len(sweep.reach)
        reach = int(round(reach * scale))
    unreachable = n * (n - 1) - reach
    if len(sweep.ecc) == 0 or sweep.ecc.max() <= 0:
        return GeodesicSummary(None, None, None, reach, unreachable, sampled)
    diameter = int(sweep.ecc.max())
    at_max = np.flatnonzero(sweep.ecc == diameter)
    keys = sorted(zip(sweep.witness_a[at_max].tolist(), sweep.witness_b[at_max].tolist()))
    by_rank = np.argsort(net.label_rank)
    a, b = keys[0]
    witness = (net.labels[by_rank[a]], net.labels[by_rank[b]])
    average = total / int(sweep.reach.sum())
    return GeodesicSummary(diameter, witness, average, reach, unreachable, sampled)


def geodesic_summary(net: Network, progress: Progress | None = None) -> GeodesicSummary:
    """Exact diameter, average distance and unreachable pairs from all sources."""
    return summarize_sweep(net, bfs_sweep(net, progress=progress))
