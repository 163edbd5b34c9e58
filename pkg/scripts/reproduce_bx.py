"""Run the full analysis on a Book-Crossing copy and diff against published values.

    python3 scripts/reproduce_bx.py --data /path/to/BX-CSV-Dump --out bx-out [--tier 3]

Tier 2 covers ingest, the two-mode networks, the projection, degree,
m-slices, tie weights and the ego network. Tier 3 adds the all-sources
sweeps (geodesics, closeness, betweenness) and constraint; on one core
these take hours, and ``--resume`` continues from checkpoints.
"""

from __future__ import annotations

import argparse
import json
import logging
import time
from pathlib import Path

from bxsna import cohesion, paths
from bxsna.pipeline import Pipeline, PipelineConfig, output_lock
from bxsna.stats import degree_report, summarize

# (check, published value, tolerance or None for exact)
TIER2 = {
    "explicit ratings": (433659, 1),
    "mother dimension": (263631, None),
    "mother arcs": (433660, None),
    "mother density": (0.00000624, 1e-8),
    "mother average degree": (3.28990142, 1e-6),
    "mother components": (14684, None),
    "mother giant": (229036, None),
    "max out-degree": (8522, None),
    "out-degree centralization": (0.03231949, 1e-6),
    "max in-degree": (707, None),
    "in-degree centralization": (0.00267556, 1e-6),
    "user-user dimension": (69768, None),
    "user-user edges": (3176585, None),
    "user-user density": (0.00130522, 1e-6),
    "user-user average degree": (91.06137484, 1e-4),
    "user-user components (size >= 2)": (883, None),
    "user-user isolates": (13096, None),
    "user-user giant": (54701, None),
    "degree centralization": (0.34307946, 1e-6),
    "ego neighbours": (24026, None),
    "ego edges": (2278058, None),
    "ego density": (0.00789314, 1e-6),
    "ego average degree": (189.63273121, 1e-4),
    "unreachable from ego": (15067, None),
}
TIER3 = {
    "diameter": (10, None),
    "average geodesic": (2.80782, 1e-4),
    "unreachable pairs": (1875356164, None),
    "max closeness": (0.4926, 5e-5),
    "mean closeness": (0.2233, 5e-5),
    "median closeness": (0.2661, 5e-5),
    "std closeness": (0.1220, 5e-5),
    "max betweenness": (0.1735, 5e-5),
    "betweenness centralization": (0.17345915, 1e-6),
    "highest constraint": (1.3203, 1e-4),
    "lowest constraint": (0.0007, 1e-4),
    "ego diameter": (8, None),
    "ego average geodesic": (2.49241, 1e-4),
    "ego betweenness centralization": (0.02163385, 1e-5),
}


def measure_tier2(p: Pipeline) -> dict:
    got = {"explicit ratings": int((p.ratings.ratings >= 1).sum())}
    mother = p.two_mode("mother")
    s, c = summarize(mother), paths.weak_components(mother)
    got.update({
        "mother dimension": s.dimension, "mother arcs": s.line_count, "mother density": s.density,
        "mother average degree": s.average_degree, "mother components": c.count, "mother giant": c.giant,
    })
    out, inn = degree_report(mother, "out"), degree_report(mother, "in")
    got.update({
        "max out-degree": out.highest, "out-degree centralization": out.centralization,
        "max in-degree": inn.highest, "in-degree centralization": inn.centralization,
    })
    uu = p.user_user
    s, c = summarize(uu), paths.weak_components(uu, min_size=2)
    got.update({
        "user-user dimension": s.dimension, "user-user edges": s.line_count, "user-user density": s.density,
        "user-user average degree": s.average_degree, "user-user components (size >= 2)": c.count_min_size,
        "user-user isolates": c.singletons, "user-user giant": c.giant,
        "degree centralization": degree_report(uu, "all").centralization,
    })
    ego = p.ego_id  # highest-degree user, 11676 on the canonical crawl
    eg = cohesion.ego_network(uu, ego, include_ego=False, betweenness=False).stats
    got.update({
        "ego neighbours": eg.neighbors, "ego edges": eg.edges, "ego density": eg.density,
        "ego average degree": eg.average_degree,
        "unreachable from ego": paths.distances_from(uu, ego).unreachable,
    })
    return got


def measure_tier3(p: Pipeline) -> dict:
    uu = p.user_user
    g = paths.summarize_sweep(uu, p.sweep)
    clo, btw = p.closeness.summary, p.betweenness
    (_, hi), (_, lo) = cohesion.aggregate_constraint_all(uu).extremes()
    eg = cohesion.ego_network(uu, p.ego_id, include_ego=False).stats
    return {
        "diameter": g.diameter, "average geodesic": g.average, "unreachable pairs": g.unreachable_pairs,
        "max closeness": clo.highest, "mean closeness": clo.mean, "median closeness": clo.median,
        "std closeness": clo.std, "max betweenness": btw.summary.highest,
        "betweenness centralization": btw.centralization, "highest constraint": hi, "lowest constraint": lo,
        "ego diameter": eg.diameter, "ego average geodesic": eg.average_geodesic,
        "ego betweenness centralization": eg.betweenness_centralization,
    }


def compare(expected: dict, got: dict) -> list[dict]:
    rows = []
    for name, (want, tol) in expected.items():
        value = got.get(name)
        ok = value is not None and (value == want if tol is None else abs(value - want) <= tol)
        rows.append({"check": name, "published": want, "obtained": value, "tolerance": tol, "ok": bool(ok)})
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", type=Path, required=True, help="directory holding the three BX CSVs")
    ap.add_argument("--out", type=Path, default=Path("bx-out"))
    ap.add_argument("--tier", type=int, choices=(2, 3), default=2)
    ap.add_argument("--resume", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    conf = PipelineConfig(
        ratings=args.data / "BX-Book-Ratings.csv",
        users=args.data / "BX-Users.csv",
        books=args.data / "BX-Books.csv",
        out=args.out,
        resume=args.resume,
    )
    start = time.perf_counter()
    with output_lock(args.out):
        p = Pipeline(conf)
        rows = compare(TIER2, measure_tier2(p))
        if args.tier == 3:
            rows += compare(TIER3, measure_tier3(p))
        checksum = p.checksum
    for r in rows:
        print(f"{'ok  ' if r['ok'] else 'DIFF'} {r['check']:<36} published={r['published']!r:<14} obtained={r['obtained']!r}")
    report = {"dataset_sha256": checksum, "seconds": round(time.perf_counter() - start, 1), "checks": rows}
    (args.out / "reproduction.json").write_text(json.dumps(report, indent=2, default=str))
    return 0 if all(r["ok"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
