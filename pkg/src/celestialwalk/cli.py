"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 geometric or validation failure,
3 a walk aborted (budget exhausted or cycle detected).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Sequence

from . import bench, generators
from .geometry import GeometryError
from .mesh import Mesh, dumps_mesh, loads_mesh, precompute_obtuse_bits, read_mesh, validate_mesh
from .svg import render_svg
from .walks import WALKS, dumps_trace, loads_trace, run_walk

EXIT_OK, EXIT_USAGE, EXIT_GEOMETRY, EXIT_ABORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected a point as x,y, got {text!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"bad point {text!r}") from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise UsageError(f"non-finite point {text!r}")
    return x, y


def _ints(text: str) -> list[int]:
    try:
        return [int(float(t)) for t in text.split(",") if t]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="celestialwalk", description="Walk-based point location in convex subdivisions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a mesh file")
    g.add_argument("--family", required=True, choices=["hex", "delaunay", "flipped", "chords", "loop"])
    g.add_argument("--rows", type=int, default=3)
    g.add_argument("--cols", type=int, default=3)
    g.add_argument("--edge-len", type=float, default=1.0)
    g.add_argument("--fill-hull", action="store_true", help="triangulate hex outline pockets")
    g.add_argument("--points", type=int, default=100)
    g.add_argument("--flips", type=int, default=None, help="default: 2 x points")
    g.add_argument("--splits", type=int, default=10)
    g.add_argument("--max-meshes", type=int, default=10_000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")

    v = sub.add_parser("validate", help="check a mesh file")
    v.add_argument("path")

    lo = sub.add_parser("locate", help="run one walk")
    lo.add_argument("--mesh", required=True)
    lo.add_argument("--point", type=parse_point, default=None)
    lo.add_argument("--start", type=int, default=None)
    lo.add_argument("--walk", choices=list(WALKS), default="celestial")
    lo.add_argument("--selector", choices=["first", "random", "greedy"], default="first")
    lo.add_argument("--stochastic", action="store_true", help="stochastic visibility walk")
    lo.add_argument("--seed", type=int, default=0)
    lo.add_argument("--budget", type=int, default=None)
    lo.add_argument("--trace", default=None)
    lo.add_argument("--memo-obtuse", action="store_true")

    c = sub.add_parser("compare", help="run several walks on one query")
    c.add_argument("--mesh", required=True)
    c.add_argument("--point", type=parse_point, default=None)
    c.add_argument("--start", type=int, default=None)
    c.add_argument("--walks", default=",".join(WALKS))
    c.add_argument("--selector", choices=["first", "random", "greedy"], default="first")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=None)
    c.add_argument("--out-csv", default=None)

    b = sub.add_parser("bench", help="batch experiments, CSV output")
    b.add_argument("--family", choices=["delaunay", "flipped", "chords", "hex"], default="delaunay")
    b.add_argument("--sizes", type=_ints, default=[100, 1000])
    b.add_argument("--queries", type=int, default=200)
    b.add_argument("--strategies", default="celestial,visibility,straight")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out-csv", default="-")
    b.add_argument("--keep-traces", default=None, metavar="PATH")
    b.add_argument("--threads", type=int, default=1)

    t = sub.add_parser("trace-svg", help="draw a mesh and a walk trace")
    t.add_argument("--mesh", required=True)
    t.add_argument("--trace", default=None)
    t.add_argument("--out", default="-")
    return p


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _gen(args) -> int:
    flips = args.flips if args.flips is not None else 2 * args.points
    if args.family == "hex":
        text = dumps_mesh(generators.hex_grid(args.rows, args.cols, args.edge_len, args.fill_hull))
    elif args.family == "delaunay":
        text = dumps_mesh(generators.delaunay_mesh(args.points, args.seed))
    elif args.family == "flipped":
        text = dumps_mesh(generators.flipped_mesh(args.points, flips, args.seed))
    elif args.family == "chords":
        text = dumps_mesh(generators.chord_split_subdivision(args.splits, args.seed))
    else:
        inst = generators.find_visibility_loop_instance(args.max_meshes, args.seed)
        if inst is None:
            print("no loop instance found within budget", file=sys.stderr)
            return EXIT_GEOMETRY
        text = inst.dumps()
    _write(args.out, text)
    return EXIT_OK


def _validate(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        text = fh.read()
    m, _ = loads_mesh(text)
    problems = validate_mesh(m)
    if problems:
        for line in problems:
            print(line, file=sys.stderr)
        return EXIT_GEOMETRY
    print(f"ok: {m.n_vertices} vertices, {m.n_halfedges} half-edges, {m.outer_face} faces")
    return EXIT_OK


def _query(args, extra) -> tuple[int, tuple[float, float]]:
    point = args.point
    if point is None:
        if "query" not in extra:
            raise UsageError("--point is required (the mesh file has no query)")
        point = (float(extra["query"][0]), float(extra["query"][1]))
    start = args.start
    if start is None:
        start = int(extra.get("start", 0))
    return start, point


def _locate(args) -> int:
    m, extra = read_mesh(args.mesh)
    start, point = _query(args, extra)
    memo = precompute_obtuse_bits(m) if args.memo_obtuse else None
    res, trace = run_walk(m, args.walk, start, point, budget=args.budget, selector=args.selector,
                          seed=args.seed, memo=memo, stochastic=args.stochastic)
    print(res)
    if args.trace:
        _write(args.trace, dumps_trace(res, trace, walk=args.walk, query=point))
    return EXIT_ABORTED if res.is_aborted else EXIT_OK


def _compare(args) -> int:
    m, extra = read_mesh(args.mesh)
    start, point = _query(args, extra)
    names = [w for w in args.walks.split(",") if w]
    for w in names:
        if w not in WALKS:
            raise UsageError(f"unknown walk {w!r}")
    rows = []
    aborted = False
    for w in names:
        res, trace = run_walk(m, w, start, point, budget=args.budget, selector=args.selector,
                              seed=args.seed)
        aborted = aborted or res.is_aborted
        c = trace.counters
        print(f"{w}: {res}  faces={len(trace.visited_faces)} steps={len(trace.steps)} "
              f"orientation_tests={c.orientation_tests}")
        rows.append([w, str(res), len(trace.visited_faces), len(trace.steps), c.orientation_tests,
                     c.obtuse_tests, c.memo_lookups, c.distance_comparisons])
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["walk", "result", "visited_faces", "steps", "orientation_tests",
                         "obtuse_tests", "memo_lookups", "distance_comparisons"])
            wr.writerows(rows)
    return EXIT_ABORTED if aborted else EXIT_OK


def bench_mesh(family: str, n: int, seed: int) -> Mesh:
    if family == "delaunay":
        return generators.delaunay_mesh(n, seed)
    if family == "flipped":
        return generators.flipped_mesh(n, 2 * n, seed)
    if family == "chords":
        return generators.chord_split_subdivision(n, seed)
    side = max(1, round(math.sqrt(n)))
    return generators.hex_grid(side, side, 1.0, fill_to_hull=True)


def _bench(args) -> int:
    strategies = [s for s in args.strategies.split(",") if s]
    for s in strategies:
        if s not in bench.STRATEGIES:
            raise UsageError(f"unknown strategy {s!r}")
    if args.queries <= 0:
        raise UsageError("--queries must be positive")
    rows = []
    kept = []
    for n in args.sizes:
        m = bench_mesh(args.family, n, args.seed)
        rep = bench.run_batch(m, strategies, args.queries, args.seed, family=args.family, n=n,
                              keep_traces=bool(args.keep_traces), threads=args.threads)
        rows.extend(rep.rows())
        if args.keep_traces:
            for name in strategies:
                for (start, q), res, tr in zip(rep.queries, rep.results[name], rep.traces[name]):
                    kept.append(json.dumps({"n": n, "strategy": name,
                                            "trace": json.loads(dumps_trace(res, tr, walk=name, query=q))}))
    _write(args.out_csv, bench.csv_text(rows))
    if args.keep_traces:
        _write(args.keep_traces, "\n".join(kept) + "\n")
    return EXIT_OK


def _trace_svg(args) -> int:
    m, extra = read_mesh(args.mesh)
    trace = query = None
    if args.trace:
        with open(args.trace, encoding="utf-8") as fh:
            _, trace, meta = loads_trace(fh.read())
        query = meta.get("query")
    elif "query" in extra:
        query = extra["query"]
    _write(args.out, render_svg(m, trace, query))
    return EXIT_OK


COMMANDS = {"gen": _gen, "validate": _validate, "locate": _locate, "compare": _compare,
            "bench": _bench, "trace-svg": _trace_svg}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
