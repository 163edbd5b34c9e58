"""Whole-network statistics and Freeman degree centralization.

Conventions (they reproduce the published mother- and user-user tables):

* density is ``L / (n(n-1))`` for directed and ``2L / (n(n-1))`` for
  undirected networks, also for two-mode networks;
* average degree is ``2L / n`` in both cases;
* degree centralization divides ``sum(d_max - d_v)`` by ``(n-1)**2`` for
  in/out degree and by ``(n-1)(n-2)`` for undirected degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .ingest import BookTable, UserTable
from .netcore import BipartiteNetwork, Direction, Network, BOOK, USER

NULL = "Null"


@dataclass(frozen=True)
class NetworkSummary:
    directed: bool
    dimension: int
    line_count: int
    density: float
    loop_count: int
    multiple_line_count: int
    average_degree: float
    density_defined: bool = True


def summarize(net: Network) -> NetworkSummary:
    n, lines = net.dimension, net.line_count
    defined = n >= 2
    if not defined:
        density = 0.0
    elif net.directed:
        density = lines / (n * (n - 1))
    else:
        density = 2 * lines / (n * (n - 1))
    avg = 2 * lines / n if n else 0.0
    # loops and parallel lines are rejected at construction time
    return NetworkSummary(net.directed, n, lines, density, 0, 0, avg, defined)


@dataclass(frozen=True)
class TopEntry:
    rank: int
    external_id: str
    value: float
    normalized: float
    mode: str = USER
    attributes: dict = field(default_factory=dict)


def top_k(net: Network, values: np.ndarray, k: int, normalizer: float | None = None,
          candidates: np.ndarray | None = None) -> list[TopEntry]:
    """Highest ``k`` values, ties broken by external ID ascending.

    ``candidates`` restricts the ranking to a subset of vertex indices.
    """
    pool = np.arange(net.dimension) if candidates is None else np.asarray(candidates, dtype=np.int64)
    k = min(k, len(pool))
    if k <= 0:
        return []
    vals = np.asarray(values, dtype=np.float64)[pool]
    order = pool[np.lexsort((net.label_rank[pool], -vals))[:k]]
    out = []
    for r, i in enumerate(order.tolist(), 1):
        value = values[i]
        value = int(value) if np.issubdtype(values.dtype, np.integer) else float(value)
        norm = value / normalizer if normalizer else float(value)
        mode = net.mode(i) if isinstance(net, BipartiteNetwork) else USER
        out.append(TopEntry(r, net.labels[i], value, norm, mode))
    return out


@dataclass(frozen=True)
class DegreeReport:
    direction: str
    dimension: int
    distribution: dict[int, int]
    highest: int
    highest_frequency: int
    lowest_nonzero: int | None
    lowest_nonzero_frequency: int
    zero_count: int
    centralization: float
    top: list[TopEntry]

    @property
    def lowest(self) -> int:
        return 0 if self.zero_count else (self.lowest_nonzero or 0)


def degree_centralization(degrees: np.ndarray, directed: bool) -> float:
    n = len(degrees)
    if n < 2 or (not directed and n < 3):
        return 0.0
    spread = float((degrees.max() - degrees).sum())
    denom = (n - 1) ** 2 if directed else (n - 1) * (n - 2)
    return spread / denom


def _owners(net: Network, direction: str) -> np.ndarray | None:
    # out-degree ranks users and in-degree ranks books
    if not isinstance(net, BipartiteNetwork):
        return None
    users = np.arange(net.n_users)
    return users if direction == "out" else np.arange(net.n_users, net.dimension)


def degree_report(net: Network, direction: Direction = "all", k: int = 10) -> DegreeReport:
    if isinstance(net, BipartiteNetwork) and direction == "all":
        raise ValueError("two-mode degree reports need direction 'in' or 'out'")
    deg = net.degrees(direction)
    n = len(deg)
    hist = np.bincount(deg) if n else np.zeros(1, np.int64)
    distribution = {d: int(c) for d, c in enumerate(hist.tolist()) if c}
    nonzero = [d for d in distribution if d > 0]
    low = min(nonzero) if nonzero else None
    high = int(deg.max()) if n else 0
    return DegreeReport(
        direction=direction,
        dimension=n,
        distribution=distribution,
        highest=high,
        highest_frequency=distribution.get(high, 0) if n else 0,
        lowest_nonzero=low,
        lowest_nonzero_frequency=distribution[low] if low is not None else 0,
        zero_count=distribution.get(0, 0) if n else 0,
        centralization=degree_centralization(deg, net.directed),
        top=top_k(net, deg, k, normalizer=(n - 1) if n > 1 else None, candidates=_owners(net, direction)),
    )


def _user_attrs(users: UserTable, user_id: str) -> dict:
    rec = users.get(user_id)
    if rec is None:
        return {"age": NULL, "location": NULL, "country": NULL}
    return {
        "age": NULL if rec.age is None else rec.age,
        "location": rec.location or NULL,
        "country": rec.country or NULL,
    }


def _book_attrs(books: BookTable, isbn: str) -> dict:
    rec = books.get(isbn)
    if rec is None:
        return {"title": NULL, "author": NULL}
    return {"title": rec.title or NULL, "author": rec.author or NULL}


def annotate(entries: list[TopEntry], users: UserTable, books: BookTable) -> list[TopEntry]:
    out = []
    for e in entries:
        attrs = _book_attrs(books, e.external_id) if e.mode == BOOK else _user_attrs(users, e.external_id)
        out.append(replace(e, attributes=attrs))
    return out


def join_attributes(report: DegreeReport, users: UserTable, books: BookTable) -> DegreeReport:
    """Attach demographics (users) or titles (books) to the top list."""
    return replace(report, top=annotate(report.top, users, books))
