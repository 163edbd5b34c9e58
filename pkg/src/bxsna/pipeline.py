"""End-to-end Book-Crossing analysis: ratings -> networks -> tables.

Every expensive intermediate is written under the output directory
(``networks/*.net``, ``metrics/*.col``, ``partitions/*.clu``) and reused
on ``resume``, so sub-commands compose without recomputation.
"""

from __future__ import annotations

import configparser
import hashlib
import logging
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import centrality, cohesion, paths, stats
from .ingest import (
    BookTable,
    RatingBand,
    UserTable,
    filter_ratings,
    parse_books,
    parse_ratings,
    parse_users,
)
from .netcore import BipartiteNetwork, WeightedNetwork, build_bipartite
from .pajek import export_clu, export_pajek, import_pajek
from .projection import ProjectionRule, project
from .report import ReportBundle, Table, f4, f5, f8, share
from .stats import NULL, degree_report, join_attributes, summarize

log = logging.getLogger(__name__)

STAGES = ("ingest", "stats", "project", "centrality", "ego", "cohesion", "report")


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


class LockedError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    ratings: Path | None = None
    users: Path | None = None
    books: Path | None = None
    out: Path = Path("bx-out")
    mother_band: RatingBand = RatingBand(1, 10)
    preference_band: RatingBand = RatingBand(6, 10)
    nonpreference_band: RatingBand = RatingBand(1, 5)
    rule: str = "sum_of_products"
    top_k: int = 10
    formats: tuple[str, ...] = ("csv", "json", "md")
    exact: bool = True
    sample: int = 1000
    seed: int = 0
    threads: int | None = None
    resume: bool = False
    ego: str | None = None
    ego_include_self: bool = False
    tie_bins: int = 3

    def __post_init__(self):
        for name in ("ratings", "users", "books", "out"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, Path):
                setattr(self, name, Path(value))
        for name in ("mother_band", "preference_band", "nonpreference_band"):
            value = getattr(self, name)
            if isinstance(value, str):
                setattr(self, name, RatingBand.parse(value))
        if isinstance(self.formats, str):
            self.formats = tuple(f.strip() for f in self.formats.split(",") if f.strip())
        bad = set(self.formats) - {"csv", "json", "md"}
        if bad:
            raise ValueError(f"unknown output formats {sorted(bad)}")
        ProjectionRule(weight_rule=self.rule)
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")

    def echo(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = str(value) if isinstance(value, (Path, RatingBand)) else value
        out["formats"] = list(self.formats)
        return out


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def load_config(path: str | Path, **overrides) -> PipelineConfig:
    """Read a flat ``key = value`` file; ``overrides`` (not None) win."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    text = Path(path).read_text(encoding="utf-8")
    parser.read_string("[pipeline]\n" + text)
    known = {f.name: f for f in fields(PipelineConfig)}
    values = {}
    for key, raw in parser["pipeline"].items():
        key = key.replace("-", "_")
        if key not in known:
            raise ValueError(f"{path}: unknown config key {key!r}")
        values[key] = _coerce(key, raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig(**values)


def _coerce(key: str, raw: str):
    if key in ("exact", "resume", "ego_include_self"):
        return _BOOL[raw.strip().lower()]
    if key in ("top_k", "sample", "seed", "threads", "tie_bins"):
        return int(raw)
    return raw.strip()


def dataset_checksum(*files: Path | None) -> str:
    h = hashlib.sha256()
    for path in files:
        if path is None:
            continue
        h.update(path.name.encode())
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
    return h.hexdigest()


def composite_ranking(top_lists: Sequence[Sequence[str]], k: int = 10) -> list[tuple[str, int, int]]:
    """Combine ranked lists into (user, category, points) rows.

    Category counts the lists a user appears in; points add up the user's
    1-based positions. Rows sort by category descending, points ascending,
    then user ID.
    """
    if len(top_lists) < 4:
        raise ValueError(f"composite ranking needs 4 ranked lists, got {len(top_lists)}")
    category: dict[str, int] = {}
    points: dict[str, int] = {}
    for ranked in top_lists:
        for pos, user in enumerate(ranked, 1):
            user = str(user)
            category[user] = category.get(user, 0) + 1
            points[user] = points.get(user, 0) + pos
    rows = sorted(category, key=lambda u: (-category[u], points[u], u))
    return [(u, category[u], points[u]) for u in rows[:k]]


def demographics(users: UserTable, user_id: str) -> str:
    rec = users.get(user_id)
    if rec is None or (rec.location is None and rec.age is None):
        return NULL
    parts = [rec.location] if rec.location else []
    if rec.age is not None:
        parts.append(f"{rec.age} years old")
    return ", ".join(parts)


@contextmanager
def output_lock(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    lock = out / ".bxsna.lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise LockedError(f"{out} is in use by another run (remove {lock} if stale)") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        lock.unlink(missing_ok=True)


class Pipeline:
    """Lazily computed, disk-cached analysis state for one configuration."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out = Path(config.out)
        self.bundle = ReportBundle()
        self.timings: dict[str, float] = {}
        self.cached: dict[str, bool] = {}
        self._memo: dict[str, object] = {}
        if config.threads:
            import numba

            numba.set_num_threads(min(config.threads, numba.config.NUMBA_NUM_THREADS))

    # ------------------------------------------------------------------ helpers
    def _dir(self, name: str) -> Path:
        d = self.out / name
        d.mkdir(parents=True, exist_ok=True)
        return d

    def _memoize(self, key, fn):
        if key not in self._memo:
            start = time.perf_counter()
            self._memo[key] = fn()
            self.timings[key] = round(time.perf_counter() - start, 3)
        return self._memo[key]

    def _require(self, name: str) -> Path:
        path = getattr(self.config, name)
        if path is None:
            raise FileNotFoundError(f"no --{name} file given")
        if not Path(path).exists():
            raise FileNotFoundError(f"{name} file {path} does not exist")
        return Path(path)

    @property
    def checksum(self) -> str:
        return self._memoize(
            "checksum",
            lambda: dataset_checksum(
                self._require("ratings"),
                self.config.users if self.config.users and self.config.users.exists() else None,
                self.config.books if self.config.books and self.config.books.exists() else None,
            ),
        )

    # -------------------------------------------------------------------- data
    @property
    def ratings(self):
        return self._memoize("ratings", lambda: parse_ratings(self._require("ratings")))

    @property
    def users(self) -> UserTable:
        def load():
            path = self.config.users
            return parse_users(path) if path and path.exists() else UserTable()

        return self._memoize("users", load)

    @property
    def books(self) -> BookTable:
        def load():
            path = self.config.books
            return parse_books(path) if path and path.exists() else BookTable()

        return self._memoize("books", load)

    def bands(self) -> dict[str, RatingBand]:
        c = self.config
        return {"mother": c.mother_band, "preference": c.preference_band, "nonpreference": c.nonpreference_band}

    def two_mode(self, name: str) -> BipartiteNetwork:
        def build():
            path = self._dir("networks") / f"{name}.net"
            if self.config.resume and path.exists():
                self.cached[f"network:{name}"] = True
                return import_pajek(path)
            net = build_bipartite(filter_ratings(self.ratings, self.bands()[name]))
            export_pajek(net, path)
            return net

        return self._memoize(f"network:{name}", build)

    @property
    def user_user(self) -> WeightedNetwork:
        def build():
            path = self._dir("networks") / "user_user.net"
            if self.config.resume and path.exists():
                self.cached["network:user_user"] = True
                return import_pajek(path)
            net = project(self.two_mode("preference"), ProjectionRule("user", self.config.rule))
            export_pajek(net, path)
            return net

        return self._memoize("network:user_user", build)

    def _progress(self, what):
        def report(done, total):
            log.info("%s: %d/%d sources", what, done, total)

        return report

    def _metric(self, name: str, compute) -> centrality.MetricVector:
        def build():
            path = self._dir("metrics") / f"{name}.col"
            if self.config.resume and path.exists():
                self.cached[f"metric:{name}"] = True
                return centrality.read_metric(path)
            vec = compute()
            centrality.write_metric(vec, path)
            return vec

        return self._memoize(f"metric:{name}", build)

    @property
    def sweep(self) -> paths.SweepResult:
        def build():
            path = self._dir("metrics") / "sweep.npz"
            ckpt = self._dir("metrics") / "sweep.ckpt.npz"
            if self.config.resume and path.exists():
                self.cached["sweep"] = True
                with np.load(path) as d:
                    return paths.SweepResult(d["reach"], d["dist_sum"], d["ecc"], d["witness_a"], d["witness_b"])
            net = self.user_user
            if self.config.exact:
                result = centrality.sweep(net, checkpoint=ckpt if self.config.resume else None,
                                          progress=self._progress("bfs sweep"))
            else:
                sources = centrality._choose_sources(net.dimension, self.config.sample, self.config.seed)
                result = paths.bfs_sweep(net, sources)
            np.savez(path, reach=result.reach, dist_sum=result.dist_sum, ecc=result.ecc,
                     witness_a=result.witness_a, witness_b=result.witness_b)
            ckpt.unlink(missing_ok=True)
            return result

        return self._memoize("sweep", build)

    @property
    def closeness(self) -> centrality.MetricVector:
        c = self.config

        def compute():
            if c.exact:
                return centrality.closeness_from_sweep(self.user_user, self.sweep)
            return centrality.closeness_all(self.user_user, sample=c.sample, seed=c.seed)

        return self._metric("closeness", compute)

    @property
    def betweenness(self) -> centrality.MetricVector:
        c = self.config

        def compute():
            ckpt = self._dir("metrics") / "betweenness.ckpt.npz"
            vec = centrality.betweenness_all(
                self.user_user,
                checkpoint=ckpt if c.resume else None,
                progress=self._progress("betweenness"),
                sample=None if c.exact else c.sample,
                seed=c.seed,
            )
            ckpt.unlink(missing_ok=True)
            return vec

        return self._metric("betweenness", compute)

    @property
    def ego_id(self) -> str:
        if self.config.ego:
            return str(self.config.ego)
        return degree_report(self.user_user, "all", 1).top[0].external_id

    # ------------------------------------------------------------------ tables
    def _table(self, name, caption, headers) -> Table:
        return self.bundle.add(Table(name, caption, headers))

    def stage_ingest(self):
        r = self.ratings
        t = self._table("table_00_ingest", "Rating file load and band filters", ["Metric", "Value"])
        t.add("Rows read", r.rows_read)
        t.add("Rows rejected", r.rows_rejected)
        t.add("Duplicate (user, ISBN) rows dropped", r.duplicates_dropped)
        t.add("Ratings kept", len(r))
        t.add("Implicit ratings (0)", int((r.ratings == 0).sum()))
        t.add("Explicit ratings (1..10)", int((r.ratings >= 1).sum()))
        for name, band in self.bands().items():
            t.add(f"Ratings in {name} band {band}", len(filter_ratings(r, band)))
            self.two_mode(name)
        t.add("User records", len(self.users))
        t.add("Book records", len(self.books))

    def _overall(self, name, caption, net, min_size=1):
        s = summarize(net)
        comps = paths.weak_components(net, min_size)
        t = self._table(name, caption, ["Metric", "Value"])
        t.add("Graph Type", "Directed" if s.directed else "Undirected")
        t.add("Dimension", s.dimension)
        t.add("Number of Arcs" if s.directed else "Number of Edges", s.line_count)
        t.add("Network Density", f8(s.density))
        t.add("Number of Loops", s.loop_count)
        t.add("Number of Multiple Lines", s.multiple_line_count)
        t.add("Average Degree", f8(s.average_degree))
        t.add("Connected Components", comps.count_min_size)
        t.add("Single-Vertex Connected Component", comps.singletons)
        t.add("Maximum Vertices in a Connected Component", share(comps.giant, comps.dimension))
        return t

    def _extremes(self, name, caption, report, label):
        t = self._table(name, caption, ["Metric", "Value", "Frequency"])
        t.add(f"Highest {label} degree value", report.highest, report.highest_frequency)
        t.add(f"Lowest {label} degree value", report.lowest_nonzero or 0, report.lowest_nonzero_frequency)
        t.add(f"Vertices with {label} degree 0", 0, report.zero_count)
        t.add(f"Network {label}-degree Centralization", f8(report.centralization), "-")
        return t

    def _top_books(self, name, caption, report):
        t = self._table(name, caption, ["Rank", "In-degree", "Normalized in-degree", "ISBN", "Book Title"])
        rep = join_attributes(report, self.users, self.books)
        for e in rep.top:
            t.add(e.rank, e.value, f4(e.normalized), e.external_id, e.attributes["title"])

    def stage_stats(self):
        k = self.config.top_k
        mother = self.two_mode("mother")
        self._overall("table_02_mother_overall", "Overall statistics of the mother network", mother)
        out = degree_report(mother, "out", k)
        self._extremes("table_03_mother_out_degree", "Out-degree extremes and centralization, mother network", out, "out")
        t = self._table("table_04_top_out_degree", "Highest out-degree values (most active users)",
                        ["Rank", "Out-Degree", "Normalized Out-Degree", "User ID", "Age", "Country"])
        for e in join_attributes(out, self.users, self.books).top:
            t.add(e.rank, e.value, f4(e.normalized), e.external_id, e.attributes["age"], e.attributes["country"])
        inn = degree_report(mother, "in", k)
        self._extremes("table_05_mother_in_degree", "In-degree extremes and centralization, mother network", inn, "in")
        self._top_books("table_06_top_in_degree", "Highest in-degree values (most rated books)", inn)

        pref = self.two_mode("preference")
        self._overall("table_07_preference_overall", "Overall statistics of the user-preference network", pref)
        pin = degree_report(pref, "in", k)
        self._extremes("table_08_preference_in_degree", "In-degree extremes, user-preference network", pin, "in")
        self._top_books("table_01_preference_top_books", "Most popular books (user-preference in-degree)", pin)

        non = self.two_mode("nonpreference")
        self._overall("table_09_nonpreference_overall", "Overall statistics of the user non-preference network", non)
        nin = degree_report(non, "in", k)
        self._extremes("table_10_nonpreference_in_degree", "In-degree extremes, user non-preference network", nin, "in")
        self._top_books("table_11_nonpreference_top_books", "Most unpopular books (non-preference in-degree)", nin)

    def stage_project(self):
        net = self.user_user
        t = self._overall("table_12_user_user_overall", "Overall statistics of the user-user network", net, 2)
        t.notes.append("connected components counted for size >= 2")
        geo = paths.summarize_sweep(net, self.sweep, sampled=not self.config.exact)
        t.add("Maximum Geodesic Distance (Diameter)", geo.diameter if geo.defined else "-")
        t.add("Diameter witness pair", ", ".join(geo.witness) if geo.witness else "-")
        t.add("Average Geodesic Distance (Among Reachable Pairs)", f5(geo.average))
        t.add("Number of Unreachable Pairs", geo.unreachable_pairs)
        if geo.sampled:
            t.notes.append(f"geodesics estimated from {self.config.sample} sampled sources")
        export_pajek(net, self._dir("networks") / "user_user.net")

    def _top_users(self, name, caption, entries, fmt):
        t = self._table(name, caption, ["Rank", "User ID", "Value", "Demographic Info"])
        for e in entries:
            t.add(e.rank, e.external_id, fmt(e.value), demographics(self.users, e.external_id))

    def _metric_stats(self, name, caption, vec, label):
        s = vec.summary
        t = self._table(name, caption, ["Metric", "Value"])
        t.add("Dimension", len(vec.values))
        t.add(f"Highest {label} centrality value", f4(s.highest))
        t.add(f"Lowest {label} centrality value", f4(s.lowest))
        t.add("Arithmetic mean", f4(s.mean))
        t.add("Median", f4(s.median))
        t.add("Standard deviation", f4(s.std))
        if vec.centralization is None:
            t.add(f"Network {label} centralization", "cannot be computed (network is not connected)")
        else:
            t.add(f"Network {label} centralization", f8(vec.centralization))
        if vec.sampled:
            t.notes.append(f"estimated from {self.config.sample} sampled sources")

    def stage_centrality(self):
        net, k = self.user_user, self.config.top_k
        self.stage_project()
        deg = degree_report(net, "all", k)
        t = self._table("table_13_degree_centrality", "Degree centrality statistics of the user-user network",
                        ["Metric", "Value"])
        t.add("Dimension", deg.dimension)
        t.add("Highest degree centrality value", deg.highest)
        t.add("Lowest degree centrality value", deg.lowest)
        t.add("Network Degree Centralization", f8(deg.centralization))
        self._top_users("table_14_top_degree", "Highest degree centrality values", deg.top, str)
        clo = self.closeness
        self._metric_stats("table_15_closeness", "Closeness centrality statistics", clo, "closeness")
        self._top_users("table_16_top_closeness", "Highest closeness centrality values", clo.top(net, k), f4)
        btw = self.betweenness
        self._metric_stats("table_17_betweenness", "Betweenness centrality statistics", btw, "betweenness")
        self._top_users("table_18_top_betweenness", "Highest betweenness centrality values", btw.top(net, k), f4)

    def stage_ego(self):
        net, ego = self.user_user, self.ego_id
        eg = self._memoize("ego", lambda: cohesion.ego_network(net, ego, include_ego=self.config.ego_include_self))
        s = eg.stats
        t = self._table("table_19_ego_network", f"Ego-network statistics for user {ego}", ["Metric", "Value"])
        t.add("Graph Type", "Undirected")
        t.add("No. of Neighbors", s.neighbors)
        t.add("Number of Edges", s.edges)
        t.add("Ego-network Density", f8(s.density))
        t.add("Number of Loops", 0)
        t.add("Number of Multiple Lines", 0)
        t.add("Maximum Geodesic Distance (Diameter)", "-" if s.diameter is None else s.diameter)
        t.add("Diameter witness pair", ", ".join(s.diameter_witness) if s.diameter_witness else "-")
        t.add("Average Geodesic Distance", f5(s.average_geodesic))
        t.add("Average Degree", f8(s.average_degree))
        t.add("Ego-network Betweenness Centralization", f8(s.betweenness_centralization))
        t.notes.append("ego included in statistics" if eg.include_ego else "statistics over ego's neighbours (ego removed)")

        hist = paths.distances_from(net, ego)
        t = self._table("table_20_distances_from_ego", f"Geodesic distances from user {ego}", ["Cluster", "Frequency"])
        for label, count in hist.rows():
            t.add(label, count)

        con = self._memoize("constraint", lambda: cohesion.aggregate_constraint_all(net))
        (hi_id, hi), (lo_id, lo) = con.extremes()
        t = self._table("table_21_constraint_extremes", "Extremes of aggregate constraint",
                        ["Aggregate Constraint", "Value", "Representative"])
        t.add("Highest Value", f4(hi), hi_id)
        t.add("Lowest Value", f4(lo), lo_id)

    def stage_cohesion(self):
        net = self.user_user
        tw = cohesion.tie_weight_table(net, self.config.tie_bins)
        t = self._table("table_22_tie_weights", "Distribution of tie weights", ["I", "Tie Weights", "Frequency"])
        for i, row in enumerate(tw.rows, 1):
            label = f"{row.high:.4f}" if row.low is None else f"{row.low:.4f} - {row.high:.4f}"
            t.add(i, label, row.frequency)
        t.add("", "Total No. of Links", tw.total)

        ms = cohesion.mslice_assign(net)
        export_clu(ms.values, self._dir("partitions") / "mslice.clu")
        low, high = ms.extremes(5)
        t = self._table("table_23_mslice", "M-slice values", ["M-slice", "Value", "Number of Nodes", "Representative"])
        for group, rows in (("Lowest five values", low), ("Highest five values", high)):
            for i, (m, count, members) in enumerate(rows):
                t.add(group if i == 0 else "", m, count, ", ".join(members) or "-")

    def stage_report(self):
        for stage in ("ingest", "stats", "centrality", "ego", "cohesion"):
            self.run_stage(stage, write=False)
        k = self.config.top_k
        net = self.user_user
        lists = [
            [e.external_id for e in degree_report(self.two_mode("mother"), "out", k).top],
            [e.external_id for e in degree_report(net, "all", k).top],
            [e.external_id for e in self.closeness.top(net, k)],
            [e.external_id for e in self.betweenness.top(net, k)],
        ]
        t = self._table("table_24_top_users", "Composite ranking of top users",
                        ["Rank", "User ID", "Category", "Points", "Demographic information"])
        for rank, (user, cat, pts) in enumerate(composite_ranking(lists, k), 1):
            t.add(rank, user, cat, pts, demographics(self.users, user))

    # --------------------------------------------------------------- driver
    def run_stage(self, stage: str, write: bool = True):
        if stage not in STAGES and stage != "all":
            raise ValueError(f"unknown stage {stage!r}")
        if stage == "all":
            stage = "report"
        start = time.perf_counter()
        try:
            getattr(self, f"stage_{stage}")()
        except StageError:
            if write:
                self._write_partial()
            raise
        except Exception as exc:
            if write:
                self._write_partial()
            raise StageError(stage, exc) from exc
        self.timings[f"stage:{stage}"] = round(time.perf_counter() - start, 3)
        if write:
            self.write()
        return self.bundle

    def _write_partial(self):
        # keep whatever finished; the stage error is what gets reported
        try:
            self.write()
        except Exception:
            log.exception("could not write partial bundle")

    def write(self):
        self.bundle.manifest = {
            "dataset_sha256": self.checksum if self.config.ratings else None,
            "config": self.config.echo(),
            "timings_seconds": self.timings,
            "cached": sorted(k for k, v in self.cached.items() if v),
        }
        self.bundle.write(self.out, self.config.formats)
        self.bundle.write_manifest(self.out)


def run_pipeline(config: PipelineConfig, stage: str = "all") -> ReportBundle:
    """Run ``stage`` (default: everything) and write the bundle under ``config.out``."""
    with output_lock(Path(config.out)):
        return Pipeline(config).run_stage(stage)
