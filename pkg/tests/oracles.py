"""Brute-force reference computations, independent of the package kernels."""

from __future__ import annotations

import itertools
from collections import defaultdict

import numpy as np

from bxsna.netcore import BipartiteNetwork, WeightedNetwork

INF = np.iinfo(np.int64).max // 4


def random_weighted(rng: np.random.Generator, n_max: int, w_max: int = 50) -> WeightedNetwork:
    n = int(rng.integers(1, n_max + 1))
    p = rng.uniform(0.0, 0.5)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    labels = [f"v{int(x)}" for x in rng.permutation(10 * n)[:n]]
    w = rng.integers(1, w_max + 1, size=len(pairs))
    u = np.array([a for a, _ in pairs], dtype=np.int64)
    v = np.array([b for _, b in pairs], dtype=np.int64)
    return WeightedNetwork(tuple(labels), u, v, w)


def random_bipartite(rng: np.random.Generator, max_users: int = 20, max_books: int = 20,
                     low: int = 1, high: int = 10) -> BipartiteNetwork:
    nu = int(rng.integers(1, max_users + 1))
    nb = int(rng.integers(1, max_books + 1))
    p = rng.uniform(0.05, 0.6)
    arcs = [(a, b) for a in range(nu) for b in range(nb) if rng.random() < p]
    labels = tuple(f"u{i:02d}" for i in range(nu)) + tuple(f"b{i:02d}" for i in range(nb))
    src = np.array([a for a, _ in arcs], dtype=np.int64)
    dst = np.array([nu + b for _, b in arcs], dtype=np.int64)
    vals = rng.integers(low, high + 1, size=len(arcs))
    return BipartiteNetwork(labels, nu, src, dst, vals)


def adjacency_sets(net: WeightedNetwork) -> list[set[int]]:
    adj = [set() for _ in range(net.dimension)]
    for a, b in zip(net.u.tolist(), net.v.tolist()):
        adj[a].add(b)
        adj[b].add(a)
    return adj


def floyd_warshall(net: WeightedNetwork) -> np.ndarray:
    n = net.dimension
    d = np.full((n, n), INF, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for a, b in zip(net.u.tolist(), net.v.tolist()):
        d[a, b] = d[b, a] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    d[d >= INF] = -1
    return d


def naive_betweenness(net: WeightedNetwork) -> np.ndarray:
    """Unordered-pair betweenness by listing every shortest path."""
    n = net.dimension
    adj = adjacency_sets(net)
    dist = floyd_warshall(net)
    bc = np.zeros(n)
    for s, t in itertools.combinations(range(n), 2):
        if dist[s, t] <= 1:
            continue
        paths = []

        def walk(v, path):
            if v == t:
                paths.append(path)
                return
            for w in adj[v]:
                if dist[s, w] == dist[s, v] + 1 and dist[w, t] == dist[v, t] - 1:
                    walk(w, path + [w])

        walk(s, [s])
        through = defaultdict(int)
        for path in paths:
            for v in path[1:-1]:
                through[v] += 1
        for v, c in through.items():
            bc[v] += c / len(paths)
    return bc


def project_bruteforce(net: BipartiteNetwork, rule: str, side: str = "user") -> dict[tuple[int, int], int]:
    ratings = {(a, b): r for a, b, r in zip(net.src.tolist(), net.dst.tolist(), net.values.tolist())}
    users = range(net.n_users)
    books = range(net.n_users, net.dimension)
    left, right = (users, books) if side == "user" else (books, users)
    out = {}
    for x, y in itertools.combinations(left, 2):
        total, shared = 0, 0
        for z in right:
            kx = (x, z) if side == "user" else (z, x)
            ky = (y, z) if side == "user" else (z, y)
            if kx in ratings and ky in ratings:
                a, b = ratings[kx], ratings[ky]
                shared += 1
                total += {"count_shared": 1, "sum_of_products": a * b, "sum_of_minima": min(a, b)}[rule]
        if shared:
            off = 0 if side == "user" else net.n_users
            out[(x - off, y - off)] = total
    return out


def constraint_bruteforce(net: WeightedNetwork) -> list[float | None]:
    n = net.dimension
    w = defaultdict(float)
    for a, b, x in zip(net.u.tolist(), net.v.tolist(), net.weights.tolist()):
        w[a, b] = w[b, a] = float(x)
    adj = adjacency_sets(net)
    strength = [sum(w[i, j] for j in adj[i]) for i in range(n)]

    def p(i, j):
        return w[i, j] / strength[i] if (i, j) in w else 0.0

    out = []
    for i in range(n):
        if not adj[i]:
            out.append(None)
            continue
        total = 0.0
        for j in adj[i]:
            indirect = sum(p(i, q) * p(q, j) for q in range(n) if q not in (i, j))
            total += (p(i, j) + indirect) ** 2
        out.append(total)
    return out
