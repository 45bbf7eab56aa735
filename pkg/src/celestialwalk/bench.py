"""Batch experiments over walks: predicate counts, visited faces and scaling."""

from __future__ import annotations

import csv
import io
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .generators import delaunay_mesh
from .mesh import Mesh, face_perimeter, precompute_obtuse_bits
from .rng import SplitMix64
from .walks import (Status, Visibility, WalkResult, WalkTrace, abstract_walk, celestial_walk,
                    make_selector, straight_walk, visibility_walk)

CSV_HEADER = ("family", "n", "strategy", "queries", "mean_faces", "std_faces",
              "mean_orient_per_he", "mean_obtuse", "failures", "seed")

STRATEGIES = ("celestial", "abstract-first", "abstract-random", "abstract-greedy",
              "visibility", "visibility-stochastic", "straight")


def obtuse_fraction(m: Mesh) -> float:
    """Fraction of interior-face corners that are strictly obtuse."""
    bits = [b for b in precompute_obtuse_bits(m) if b is not None]
    return sum(bits) / len(bits)


def sample_queries(m: Mesh, count: int, rng: SplitMix64) -> list[tuple[int, tuple[float, float]]]:
    """(start half-edge, query) pairs: queries uniform in the inner 80% of the
    bounding box (rejecting points outside the domain), starts uniform over
    interior half-edges."""
    x0, y0, x1, y1 = m.bbox()
    dx, dy = 0.1 * (x1 - x0), 0.1 * (y1 - y0)
    starts = m.interior_halfedges()
    out = []
    while len(out) < count:
        p = (rng.uniform(x0 + dx, x1 - dx), rng.uniform(y0 + dy, y1 - dy))
        if not m.contains_point(p):
            continue
        out.append((rng.choice(starts), p))
    return out


def _runner(name: str, m: Mesh, memo, seed: int):
    if name == "celestial":
        return lambda s, p: celestial_walk(m, s, p, memo=memo)
    if name.startswith("abstract-"):
        kind = name.split("-", 1)[1]
        return lambda s, p: abstract_walk(m, s, p, make_selector(kind, seed))
    if name == "visibility":
        return lambda s, p: visibility_walk(m, s, p)
    if name == "visibility-stochastic":
        return lambda s, p: visibility_walk(m, s, p, Visibility.STOCHASTIC, seed=seed)
    if name == "straight":
        return lambda s, p: straight_walk(m, s, p)
    raise ValueError(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")


@dataclass
class StrategyStats:
    strategy: str
    queries: int
    mean_faces: float
    median_faces: float
    max_faces: int
    std_faces: float
    mean_orient_per_he: float
    mean_obtuse: float
    failures: int
    outside: int


def aggregate(strategy: str, outcomes: Sequence[tuple[WalkResult, WalkTrace]]) -> StrategyStats:
    """Aggregate raw walk outcomes.

    Visited faces count distinct faces entered.  Orientation tests per
    visited half-edge pools all queries: total orientation tests over the
    total number of recorded half-edge steps.  Aborted walks are failures.
    """
    faces = [len(t.visited_faces) for _, t in outcomes]
    steps = sum(len(t.steps) for _, t in outcomes)
    orient = sum(t.counters.orientation_tests for _, t in outcomes)
    return StrategyStats(
        strategy=strategy,
        queries=len(outcomes),
        mean_faces=statistics.fmean(faces),
        median_faces=statistics.median(faces),
        max_faces=max(faces),
        std_faces=statistics.pstdev(faces),
        mean_orient_per_he=orient / steps if steps else 0.0,
        mean_obtuse=statistics.fmean(t.counters.obtuse_tests for _, t in outcomes),
        failures=sum(r.status is Status.ABORTED for r, _ in outcomes),
        outside=sum(r.status is Status.OUTSIDE for r, _ in outcomes),
    )


@dataclass
class BatchReport:
    family: str
    n: int
    seed: int
    queries: list[tuple[int, tuple[float, float]]]
    stats: dict[str, StrategyStats]
    results: dict[str, list[WalkResult]]
    traces: dict[str, list[WalkTrace]] | None = None

    def rows(self) -> list[dict]:
        out = []
        for name, s in self.stats.items():
            out.append({
                "family": self.family, "n": self.n, "strategy": name, "queries": s.queries,
                "mean_faces": s.mean_faces, "std_faces": s.std_faces,
                "mean_orient_per_he": s.mean_orient_per_he, "mean_obtuse": s.mean_obtuse,
                "failures": s.failures, "seed": self.seed,
            })
        return out

    def recompute(self) -> dict[str, StrategyStats]:
        """Aggregates rebuilt from the retained raw traces."""
        if self.traces is None:
            raise ValueError("report was built without keep_traces")
        return {name: aggregate(name, list(zip(self.results[name], self.traces[name])))
                for name in self.stats}


def run_batch(mesh: Mesh, strategies: Sequence[str], queries: int, seed: int, *,
              family: str = "", n: int | None = None, memo: bool = True,
              keep_traces: bool = False, threads: int = 1) -> BatchReport:
    """Run every strategy on the same sampled (start, query) pairs."""
    if queries <= 0:
        raise ValueError("queries must be positive")
    rng = SplitMix64(seed)
    pairs = sample_queries(mesh, queries, rng)
    bits = precompute_obtuse_bits(mesh) if memo else None
    stats, results, traces = {}, {}, {}
    for name in strategies:
        run = _runner(name, mesh, bits, seed)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(lambda sp: run(*sp), pairs))
        else:
            outcomes = [run(s, p) for s, p in pairs]
        stats[name] = aggregate(name, outcomes)
        results[name] = [r for r, _ in outcomes]
        traces[name] = [t for _, t in outcomes]
    return BatchReport(family, mesh.outer_face if n is None else n, seed, pairs, stats,
                       results, traces if keep_traces else None)


def write_csv(rows: Sequence[dict], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})


def csv_text(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


@dataclass
class ScalingResult:
    table: list[tuple[int, float, float]]
    exponent: float
    intercept: float


def fit_exponent(sizes: Sequence[int], means: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope and intercept of log(mean) against log(n)."""
    if len(sizes) < 3:
        raise ValueError("need at least 3 sizes to fit an exponent")
    slope, intercept = np.polyfit(np.log(sizes), np.log(means), 1)
    return float(slope), float(intercept)


def scaling_experiment(family: str, sizes: Sequence[int], queries_per_n: int,
                       seed: int) -> ScalingResult:
    """Mean faces visited by the celestial walk against mesh size.

    Meshes are Delaunay triangulations of n uniform points in the unit
    square; queries and starts are sampled as in ``run_batch``.
    """
    if family != "delaunay-uniform":
        raise ValueError(f"unsupported family {family!r}")
    sizes = list(sizes)
    if len(sizes) < 3:
        raise ValueError("need at least 3 sizes to fit an exponent")
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    rng = SplitMix64(seed)
    table = []
    for n in sizes:
        m = delaunay_mesh(n, rng.next_u64())
        rep = run_batch(m, ["celestial"], queries_per_n, rng.next_u64(), family=family, n=n)
        s = rep.stats["celestial"]
        table.append((n, s.mean_faces, s.std_faces))
    slope, intercept = fit_exponent([r[0] for r in table], [r[1] for r in table])
    return ScalingResult(table, slope, intercept)


def perimeter_lengths(m: Mesh) -> list[int]:
    return [len(face_perimeter(m, f)) for f in range(m.n_faces)]
