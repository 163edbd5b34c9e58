"""Time the all-sources kernels on a projected synthetic network and extrapolate.

    python3 scripts/bench_sweeps.py --users 6000 --sources 500

Reports seconds per source for the BFS sweep and for Brandes, and the
implied wall time for the canonical user-user network (69,768 sources
over 3,176,585 edges), scaling linearly in sources and in edges.
"""

from __future__ import annotations

import argparse
import tempfile
import time
from pathlib import Path

import numba
import numpy as np

from bxsna import centrality, paths
from bxsna.ingest import PREFERENCE, filter_ratings, parse_ratings
from bxsna.netcore import build_bipartite
from bxsna.projection import project

CANONICAL_VERTICES = 69768
CANONICAL_EDGES = 3176585


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--users", type=int, default=6000)
    ap.add_argument("--books", type=int, default=12000)
    ap.add_argument("--sources", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    import make_synthetic_bx

    with tempfile.TemporaryDirectory() as tmp:
        make_synthetic_bx.generate(Path(tmp), args.users, args.books, 10.0, args.seed)
        ratings = filter_ratings(parse_ratings(Path(tmp) / "BX-Book-Ratings.csv"), PREFERENCE)
    t0 = time.perf_counter()
    net = project(build_bipartite(ratings))
    t_proj = time.perf_counter() - t0
    sources = np.sort(np.random.default_rng(args.seed).choice(net.dimension, min(args.sources, net.dimension),
                                                               replace=False))
    paths.bfs_sweep(net, sources[:2])  # compile
    centrality.raw_betweenness(net, sources=sources[:2])

    t0 = time.perf_counter()
    paths.bfs_sweep(net, sources)
    t_bfs = (time.perf_counter() - t0) / len(sources)
    t0 = time.perf_counter()
    centrality.raw_betweenness(net, sources=sources)
    t_bc = (time.perf_counter() - t0) / len(sources)

    scale = CANONICAL_EDGES / max(net.edge_count, 1)
    print(f"threads={numba.get_num_threads()} vertices={net.dimension} edges={net.edge_count} "
          f"projection={t_proj:.2f}s")
    for name, per in (("bfs sweep", t_bfs), ("brandes", t_bc)):
        hours = per * scale * CANONICAL_VERTICES / 3600
        print(f"{name:<10} {per * 1e3:8.3f} ms/source  -> ~{hours:.1f} h on the canonical network")


if __name__ == "__main__":
    main()
