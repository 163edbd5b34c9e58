"""Immutable two-mode and one-mode networks over compact index arrays.

Both network types keep a dense vertex registry (index -> external ID) and
adjacency as CSR arrays (``indptr``/``indices``) with neighbours sorted by
index inside each row.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Literal

import numpy as np

from .ingest import RatingTable

USER = "user"
BOOK = "book"

Direction = Literal["in", "out", "all"]


class UnknownVertexError(KeyError):
    def __init__(self, external_id):
        super().__init__(external_id)
        self.external_id = external_id

    def __str__(self):
        return f"unknown vertex {self.external_id!r}"


def _csr(rows: np.ndarray, cols: np.ndarray, n_rows: int, *payload: np.ndarray):
    """Sort (rows, cols) lexicographically and return indptr, cols, payload..."""
    order = np.lexsort((cols, rows))
    counts = np.bincount(rows, minlength=n_rows) if n_rows else np.zeros(0, np.int64)
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    out = [indptr, np.ascontiguousarray(cols[order], dtype=np.int64)]
    out.extend(np.ascontiguousarray(p[order]) for p in payload)
    return out


def _freeze(*arrays: np.ndarray):
    for a in arrays:
        a.flags.writeable = False


class _Registry:
    """Shared vertex-registry behaviour."""

    labels: tuple[str, ...]

    @cached_property
    def _index(self) -> dict[str, int]:
        index = {label: i for i, label in enumerate(self.labels)}
        if len(index) != len(self.labels):
            raise ValueError("vertex labels must be unique")
        return index

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def index_of(self, external_id) -> int:
        try:
            return self._index[str(external_id)]
        except KeyError:
            raise UnknownVertexError(external_id) from None

    def __contains__(self, external_id) -> bool:
        return str(external_id) in self._index

    def label(self, index: int) -> str:
        return self.labels[index]

    @cached_property
    def label_rank(self) -> np.ndarray:
        """Position of each vertex when labels are sorted as strings."""
        order = np.argsort(np.array(self.labels, dtype=object), kind="stable")
        rank = np.empty(len(order), dtype=np.int64)
        rank[order] = np.arange(len(order))
        return rank


@dataclass(frozen=True, eq=False)
class BipartiteNetwork(_Registry):
    """Directed two-mode network: every arc runs from a user to a book.

    Users occupy indices ``0..n_users-1`` and books the rest. ``values``
    holds the rating carried by each arc, aligned with ``src``/``dst``.
    """

    labels: tuple[str, ...]
    n_users: int
    src: np.ndarray
    dst: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        n = len(self.labels)
        src = np.asarray(self.src, dtype=np.int64)
        dst = np.asarray(self.dst, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.int64)
        if not (len(src) == len(dst) == len(values)):
            raise ValueError("src, dst and values must have equal length")
        if len(src):
            if src.min() < 0 or src.max() >= self.n_users:
                raise ValueError("arc source is not a user vertex")
            if dst.min() < self.n_users or dst.max() >= n:
                raise ValueError("arc target is not a book vertex")
            key = src * n + dst
            if len(np.unique(key)) != len(key):
                raise ValueError("parallel arcs are not allowed")
        _freeze(src, dst, values)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(self.labels))

    directed = True

    @property
    def arc_count(self) -> int:
        return len(self.src)

    line_count = arc_count

    @property
    def n_books(self) -> int:
        return self.dimension - self.n_users

    def mode(self, index: int) -> str:
        return USER if index < self.n_users else BOOK

    @cached_property
    def out_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, books, ratings) over all vertices; books have empty rows."""
        arrays = _csr(self.src, self.dst, self.dimension, self.values)
        _freeze(*arrays)
        return tuple(arrays)

    @cached_property
    def in_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, users, ratings) over all vertices; users have empty rows."""
        arrays = _csr(self.dst, self.src, self.dimension, self.values)
        _freeze(*arrays)
        return tuple(arrays)

    @cached_property
    def undirected_csr(self) -> tuple[np.ndarray, np.ndarray]:
        rows = np.concatenate([self.src, self.dst])
        cols = np.concatenate([self.dst, self.src])
        indptr, indices = _csr(rows, cols, self.dimension)
        _freeze(indptr, indices)
        return indptr, indices

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_csr[0])

    def in_degrees(self) -> np.ndarray:
        return np.diff(self.in_csr[0])

    def degrees(self, direction: Direction = "all") -> np.ndarray:
        if direction == "out":
            return self.out_degrees()
        if direction == "in":
            return self.in_degrees()
        if direction == "all":
            return self.out_degrees() + self.in_degrees()
        raise ValueError(f"unknown direction {direction!r}")

    @classmethod
    def empty(cls) -> "BipartiteNetwork":
        z = np.zeros(0, dtype=np.int64)
        return cls((), 0, z, z, z)


@dataclass(frozen=True, eq=False)
class WeightedNetwork(_Registry):
    """Undirected one-mode network with positive integer edge weights.

    Edges are stored once with ``u < v``; the CSR view holds both directions.
    """

    labels: tuple[str, ...]
    u: np.ndarray
    v: np.ndarray
    weights: np.ndarray

    directed = False

    def __post_init__(self):
        n = len(self.labels)
        u = np.asarray(self.u, dtype=np.int64)
        v = np.asarray(self.v, dtype=np.int64)
        w = np.asarray(self.weights, dtype=np.int64)
        if not (len(u) == len(v) == len(w)):
            raise ValueError("u, v and weights must have equal length")
        if len(u):
            if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(u == v):
                raise ValueError("loops are not allowed")
            if w.min() < 1:
                raise ValueError("edge weights must be >= 1")
            lo, hi = np.minimum(u, v), np.maximum(u, v)
            order = np.lexsort((hi, lo))
            u, v, w = lo[order], hi[order], w[order]
            key = u * n + v
            if np.any(key[1:] == key[:-1]):
                raise ValueError("parallel edges are not allowed")
        _freeze(u, v, w)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def edge_count(self) -> int:
        return len(self.u)

    line_count = edge_count

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, neighbours, weights), symmetric."""
        rows = np.concatenate([self.u, self.v])
        cols = np.concatenate([self.v, self.u])
        w = np.concatenate([self.weights, self.weights])
        arrays = _csr(rows, cols, self.dimension, w)
        _freeze(*arrays)
        return tuple(arrays)

    @property
    def undirected_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return self.csr[0], self.csr[1]

    def degrees(self, direction: Direction = "all") -> np.ndarray:
        return np.diff(self.csr[0])

    def neighbors(self, index: int) -> np.ndarray:
        indptr, nbrs, _ = self.csr
        return nbrs[indptr[index] : indptr[index + 1]]

    def weight(self, a: int, b: int) -> int:
        """Weight of edge a--b, 0 when absent."""
        indptr, nbrs, w = self.csr
        lo, hi = indptr[a], indptr[a + 1]
        pos = lo + np.searchsorted(nbrs[lo:hi], b)
        if pos < hi and nbrs[pos] == b:
            return int(w[pos])
        return 0

    def edges(self) -> Iterable[tuple[str, str, int]]:
        for a, b, w in zip(self.u.tolist(), self.v.tolist(), self.weights.tolist()):
            yield self.labels[a], self.labels[b], w

    @classmethod
    def from_edges(cls, labels, edges) -> "WeightedNetwork":
        """Build from ``(label_a, label_b, weight)`` triples over ``labels``."""
        labels = tuple(str(x) for x in labels)
        index = {x: i for i, x in enumerate(labels)}
        edges = list(edges)
        u = np.array([index[str(a)] for a, _, _ in edges], dtype=np.int64)
        v = np.array([index[str(b)] for _, b, _ in edges], dtype=np.int64)
        w = np.array([wt for _, _, wt in edges], dtype=np.int64)
        return cls(labels, u, v, w)


Network = BipartiteNetwork | WeightedNetwork


def build_bipartite(ratings: RatingTable) -> BipartiteNetwork:
    """One vertex per distinct user and book, one arc per rating.

    Users come first in lexicographic order of their IDs, then books in
    ISBN order, so indices are stable across runs.
    """
    if len(ratings) == 0:
        return BipartiteNetwork.empty()
    users, user_idx = np.unique(ratings.user_ids.astype(str), return_inverse=True)
    books, book_idx = np.unique(ratings.isbns.astype(str), return_inverse=True)
    labels = tuple(users.tolist()) + tuple(books.tolist())
    return BipartiteNetwork(
        labels,
        len(users),
        user_idx.astype(np.int64),
        book_idx.astype(np.int64) + len(users),
        ratings.ratings.astype(np.int64),
    )


def degree(net: Network, vertex, direction: Direction = "all") -> int:
    """Number of arcs/edges at ``vertex`` (an external ID)."""
    i = net.index_of(vertex)
    return int(net.degrees(direction)[i])


def induced_subgraph(net: WeightedNetwork, vertices: Iterable[int]) -> WeightedNetwork:
    """Subnetwork on the given vertex indices, in ascending index order."""
    keep = np.unique(np.fromiter(vertices, dtype=np.int64))
    remap = np.full(net.dimension, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    mask = (remap[net.u] >= 0) & (remap[net.v] >= 0)
    labels = tuple(net.labels[i] for i in keep.tolist())
    return WeightedNetwork(labels, remap[net.u[mask]], remap[net.v[mask]], net.weights[mask])
