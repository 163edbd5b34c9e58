"""Closeness and betweenness centrality on undirected one-mode networks.

Closeness is scaled by the reachable fraction so that disconnected
networks stay comparable::

    c(v) = (r_v / (n - 1)) * (r_v / S_v)

with ``r_v`` reachable other vertices and ``S_v`` their total distance.
Betweenness counts unordered pairs, normalized by ``(n-1)(n-2)/2``; its
centralization is ``sum(b_max - b_v) / (n - 1)`` over normalized values.

Both sweeps run source by source in a fixed order, in blocks, and can
checkpoint after every block.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Callable

import numpy as np

from . import _kernels
from .netcore import Network, WeightedNetwork
from .paths import SweepResult, bfs_sweep as _bfs_block
from .stats import TopEntry, degree_centralization, top_k

log = logging.getLogger(__name__)

Progress = Callable[[int, int], None]


@dataclass(frozen=True)
class MetricSummary:
    highest: float
    lowest: float
    mean: float
    median: float
    std: float


def summarize_metric(values) -> MetricSummary:
    """Mean, lower median and population standard deviation."""
    values = np.asarray(values, dtype=np.float64)
    if len(values) == 0:
        raise ValueError("cannot summarize an empty metric vector")
    ordered = np.sort(values)
    median = ordered[(len(ordered) - 1) // 2]
    return MetricSummary(
        highest=float(ordered[-1]),
        lowest=float(ordered[0]),
        mean=float(values.mean()),
        median=float(median),
        std=float(values.std()),
    )


@dataclass(frozen=True, eq=False)
class MetricVector:
    name: str
    labels: tuple[str, ...]
    values: np.ndarray
    centralization: float | None = None
    sampled: bool = False

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise ValueError("one value per vertex required")

    @property
    def summary(self) -> MetricSummary:
        return summarize_metric(self.values)

    def value(self, external_id) -> float:
        return float(self.values[self.labels.index(str(external_id))])

    def top(self, net: Network, k: int = 10) -> list[TopEntry]:
        return top_k(net, self.values, k)


def _fingerprint(net: Network, sources: np.ndarray) -> str:
    h = hashlib.sha256()
    indptr, indices = net.undirected_csr
    for arr in (indptr, indices, sources):
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()


def _load_checkpoint(path: Path | None, fingerprint: str):
    if path is None or not path.exists():
        return None
    with np.load(path, allow_pickle=False) as data:
        if str(data["fingerprint"]) != fingerprint:
            log.warning("checkpoint %s belongs to another network; ignoring it", path)
            return None
        return {k: data[k] for k in data.files}


def _save_checkpoint(path: Path | None, **arrays) -> None:
    if path is None:
        return
    tmp = path.with_name(path.name + ".tmp.npz")
    np.savez(tmp, **arrays)
    os.replace(tmp, path)


def _choose_sources(n: int, sample: int | None, seed: int) -> np.ndarray:
    if sample is None or sample >= n:
        return np.arange(n, dtype=np.int64)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n, size=sample, replace=False)).astype(np.int64)


def sweep(
    net: Network,
    block: int = 2048,
    checkpoint: str | PathLike | None = None,
    progress: Progress | None = None,
) -> SweepResult:
    """All-sources BFS sweep with optional block-level checkpointing."""
    n = net.dimension
    sources = np.arange(n, dtype=np.int64)
    path = Path(checkpoint) if checkpoint else None
    fp = _fingerprint(net, sources)
    state = _load_checkpoint(path, fp)
    cols = [np.zeros(n, np.int64) for _ in range(5)]
    done = 0
    if state is not None:
        done = int(state["done"])
        for i, key in enumerate(("reach", "dist_sum", "ecc", "witness_a", "witness_b")):
            cols[i][:] = state[key]
        log.info("resuming BFS sweep at source %d/%d", done, n)
    for start in range(done, n, block):
        part = _bfs_block(net, sources[start : start + block], block=block)
        stop = start + len(part.reach)
        for i, arr in enumerate((part.reach, part.dist_sum, part.ecc, part.witness_a, part.witness_b)):
            cols[i][start:stop] = arr
        _save_checkpoint(path, fingerprint=fp, done=stop, reach=cols[0], dist_sum=cols[1],
                         ecc=cols[2], witness_a=cols[3], witness_b=cols[4])
        if progress:
            progress(stop, n)
    return SweepResult(*cols)


def closeness_from_sweep(net: Network, result: SweepResult) -> MetricVector:
    n = net.dimension
    reach = result.reach.astype(np.float64)
    total = result.dist_sum.astype(np.float64)
    values = np.zeros(n, np.float64)
    ok = total > 0
    if n > 1:
        values[ok] = (reach[ok] / (n - 1)) * (reach[ok] / total[ok])
    return MetricVector("closeness", net.labels, values, centralization=None)


def _sampled_closeness(net: Network, sample: int, seed: int) -> MetricVector:
    n = net.dimension
    indptr, indices = net.undirected_csr
    pivots = _choose_sources(n, sample, seed)
    reach = np.zeros(n, np.float64)
    total = np.zeros(n, np.float64)
    for p in pivots.tolist():
        dist = _kernels.bfs_distances(indptr, indices, p)
        hit = dist > 0
        reach[hit] += 1
        total[hit] += dist[hit]
    scale = n / len(pivots)
    reach *= scale
    total *= scale
    values = np.zeros(n, np.float64)
    ok = total > 0
    values[ok] = (reach[ok] / (n - 1)) * (reach[ok] / total[ok])
    return MetricVector("closeness", net.labels, values, sampled=True)


def closeness_all(
    net: Network,
    block: int = 2048,
    checkpoint: str | PathLike | None = None,
    progress: Progress | None = None,
    sample: int | None = None,
    seed: int = 0,
) -> MetricVector:
    """Component-scaled closeness for every vertex; isolates get 0.

    Centralization is left undefined for disconnected networks.
    """
    if sample is not None and sample < net.dimension:
        return _sampled_closeness(net, sample, seed)
    result = sweep(net, block=block, checkpoint=checkpoint, progress=progress)
    vec = closeness_from_sweep(net, result)
    if net.dimension > 2 and np.all(result.reach == net.dimension - 1):
        v = vec.values
        cent = float((v.max() - v).sum() * (2 * net.dimension - 3) / ((net.dimension - 1) * (net.dimension - 2)))
        vec = MetricVector(vec.name, vec.labels, v, centralization=cent)
    return vec


def raw_betweenness(
    net: Network,
    sources: np.ndarray | None = None,
    block: int = 1024,
    checkpoint: str | PathLike | None = None,
    progress: Progress | None = None,
) -> np.ndarray:
    """Sum of single-source dependencies over ``sources`` (ordered pairs)."""
    n = net.dimension
    if sources is None:
        sources = np.arange(n, dtype=np.int64)
    indptr, indices = net.undirected_csr
    path = Path(checkpoint) if checkpoint else None
    fp = _fingerprint(net, sources)
    state = _load_checkpoint(path, fp)
    acc = np.zeros(n, np.float64)
    done = 0
    if state is not None:
        done = int(state["done"])
        acc[:] = state["acc"]
        log.info("resuming betweenness at source %d/%d", done, len(sources))
    for start in range(done, len(sources), block):
        chunk = sources[start : start + block]
        acc += _kernels.brandes_partial(indptr, indices, chunk)
        stop = start + len(chunk)
        _save_checkpoint(path, fingerprint=fp, done=stop, acc=acc)
        if progress:
            progress(stop, len(sources))
    return acc


def betweenness_all(
    net: Network,
    block: int = 1024,
    checkpoint: str | PathLike | None = None,
    progress: Progress | None = None,
    sample: int | None = None,
    seed: int = 0,
) -> MetricVector:
    """Normalized betweenness ``2 B(v) / ((n-1)(n-2))`` with centralization."""
    n = net.dimension
    sources = _choose_sources(n, sample, seed)
    acc = raw_betweenness(net, sources, block=block, checkpoint=checkpoint, progress=progress)
    sampled = len(sources) < n
    if sampled:
        acc *= n / len(sources)
    # acc counts every unordered pair twice, so acc / ((n-1)(n-2)) == 2B / ((n-1)(n-2))
    values = acc / ((n - 1) * (n - 2)) if n > 2 else np.zeros(n, np.float64)
    cent = float((values.max() - values).sum() / (n - 1)) if n > 1 else 0.0
    return MetricVector("betweenness", net.labels, values, centralization=cent, sampled=sampled)


def write_metric(vec: MetricVector, path: str | PathLike) -> None:
    """Two-column text file: external ID and value at full precision."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        cent = "" if vec.centralization is None else repr(vec.centralization)
        fh.write(f"# metric={vec.name} n={len(vec.values)} centralization={cent} sampled={int(vec.sampled)}\n")
        fh.write("id\tvalue\n")
        for label, value in zip(vec.labels, vec.values.tolist()):
            fh.write(f"{label}\t{value!r}\n")


def read_metric(path: str | PathLike) -> MetricVector:
    with open(path, encoding="utf-8") as fh:
        meta = dict(item.split("=", 1) for item in fh.readline().lstrip("# ").split())
        if fh.readline().strip() != "id\tvalue":
            raise ValueError(f"{path}: missing 'id\\tvalue' header")
        labels, values = [], []
        for line in fh:
            label, value = line.rstrip("\n").split("\t")
            labels.append(label)
            values.append(float(value))
    cent = float(meta["centralization"]) if meta.get("centralization") else None
    return MetricVector(meta["metric"], tuple(labels), np.array(values), cent, meta.get("sampled") == "1")


def degree_vector(net: WeightedNetwork) -> MetricVector:
    deg = net.degrees()
    return MetricVector("degree", net.labels, deg.astype(np.float64), degree_centralization(deg, False))
