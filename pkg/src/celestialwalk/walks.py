"""Oblivious and non-oblivious walks for point location in convex subdivisions.

Every walk returns ``(WalkResult, WalkTrace)``.  The trace records the
half-edge path the walk pointer follows; consecutive entries are related
by one ``next`` or ``twin`` move, so the path is a valid navigation in the
mesh.  ``CrossTwin`` steps carry the half-edge arrived at (the new entry
edge of the next face).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .geometry import CelestialDistance, GeometryError, InvalidInputError, cd_less, celestial_distance, dot_sign, orient_sign
from .mesh import Mesh, MeshError
from .rng import SplitMix64


class Action(str, enum.Enum):
    CROSS_TWIN = "CrossTwin"
    ADVANCE_NEXT = "AdvanceNext"
    SHIFT_PAIR = "ShiftPair"


class Status(str, enum.Enum):
    LOCATED = "located"
    OUTSIDE = "outside"
    ABORTED = "aborted"


class AbortReason(str, enum.Enum):
    BUDGET_EXHAUSTED = "BudgetExhausted"
    CYCLE_DETECTED = "CycleDetected"


class InvalidStartError(GeometryError):
    pass


@dataclass(frozen=True)
class WalkResult:
    status: Status
    face: int | None = None
    exit: int | None = None
    reason: AbortReason | None = None

    @classmethod
    def located(cls, face: int) -> "WalkResult":
        return cls(Status.LOCATED, face=face)

    @classmethod
    def outside(cls, exit: int) -> "WalkResult":
        return cls(Status.OUTSIDE, exit=exit)

    @classmethod
    def aborted(cls, reason: AbortReason) -> "WalkResult":
        return cls(Status.ABORTED, reason=AbortReason(reason))

    @property
    def is_located(self) -> bool:
        return self.status is Status.LOCATED

    @property
    def is_aborted(self) -> bool:
        return self.status is Status.ABORTED

    def __str__(self) -> str:
        if self.status is Status.LOCATED:
            return f"Located({self.face})"
        if self.status is Status.OUTSIDE:
            return f"Outside({self.exit})"
        return f"Aborted({self.reason.value})"

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"status": self.status.value}
        if self.face is not None:
            d["face"] = self.face
        if self.exit is not None:
            d["exit"] = self.exit
        if self.reason is not None:
            d["reason"] = self.reason.value
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "WalkResult":
        reason = d.get("reason")
        return cls(Status(d["status"]), d.get("face"), d.get("exit"),
                   AbortReason(reason) if reason is not None else None)


@dataclass
class Counters:
    orientation_tests: int = 0
    obtuse_tests: int = 0
    memo_lookups: int = 0
    distance_comparisons: int = 0


@dataclass
class WalkTrace:
    start: int
    steps: list[tuple[int, Action]] = field(default_factory=list)
    visited_faces: list[int] = field(default_factory=list)
    counters: Counters = field(default_factory=Counters)

    def crossed_edges(self) -> list[int]:
        return [e for e, a in self.steps if a is Action.CROSS_TWIN]

    def path(self) -> list[int]:
        return [self.start] + [e for e, _ in self.steps]


class _Recorder:
    """Per-walk bookkeeping: path, first-entry face list and the step budget."""

    def __init__(self, m: Mesh, start: int, budget: int):
        self.trace = WalkTrace(start)
        self.steps = self.trace.steps
        self.face = m.face
        self.seen_faces = {m.face[start]}
        self.trace.visited_faces.append(m.face[start])
        self.budget = budget

    def step(self, e: int, action: Action) -> bool:
        """Record a move; False once the budget is exceeded."""
        self.steps.append((e, action))
        if action is Action.CROSS_TWIN:
            f = self.face[e]
            if f not in self.seen_faces:
                self.seen_faces.add(f)
                self.trace.visited_faces.append(f)
        return len(self.steps) <= self.budget


def default_budget(m: Mesh) -> int:
    return 10 * m.n_halfedges


def _prepare(m: Mesh, start: int, p: Sequence[float], budget: int | None):
    if not 0 <= start < m.n_halfedges:
        raise InvalidStartError(f"invalid half-edge id {start}")
    if m.is_outer(m.face[start]):
        raise InvalidStartError("start half-edge lies on the outer face")
    try:
        px, py = float(p[0]), float(p[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidInputError(f"bad query point {p!r}") from exc
    if px != px or py != py or abs(px) == float("inf") or abs(py) == float("inf"):
        raise InvalidInputError(f"non-finite query point {p!r}")
    if budget is None:
        budget = default_budget(m)
    if budget <= 0:
        raise ValueError("budget must be positive")
    return px, py, budget


class _Geometry:
    """Counting predicate adaptor over one mesh and query point."""

    def __init__(self, m: Mesh, px: float, py: float, counters: Counters):
        self.pts = m.points
        self.origin = m.origin
        self.twin = m.twin
        self.next = m.next
        self.px, self.py = px, py
        self.c = counters

    def right(self, e: int) -> bool:
        self.c.orientation_tests += 1
        a = self.pts[self.origin[e]]
        b = self.pts[self.origin[self.twin[e]]]
        return orient_sign(a[0], a[1], b[0], b[1], self.px, self.py) < 0

    def obtuse(self, e1: int, e2: int, memo) -> bool:
        if memo is not None:
            self.c.memo_lookups += 1
            return memo[e1]
        self.c.obtuse_tests += 1
        a = self.pts[self.origin[e1]]
        b = self.pts[self.origin[e2]]
        c = self.pts[self.origin[self.twin[e2]]]
        return dot_sign(a[0], a[1], b[0], b[1], b[0], b[1], c[0], c[1]) > 0

    def left_of_bisector(self, e1: int, e2: int) -> bool:
        self.c.orientation_tests += 1
        a = self.pts[self.origin[e1]]
        b = self.pts[self.origin[e2]]
        c = self.pts[self.origin[self.twin[e2]]]
        return dot_sign(a[0], a[1], c[0], c[1], b[0], b[1], self.px, self.py) > 0


# -- celestial walk -------------------------------------------------------------

def celestial_walk(m: Mesh, start: int, p: Sequence[float], budget: int | None = None,
                   memo: Sequence[bool | None] | None = None) -> tuple[WalkResult, WalkTrace]:
    """Orientation-only walk that terminates on every convex subdivision.

    Scans the current face for an edge with p strictly on its right; while
    the corner after that edge is obtuse and p lies left of the corner's
    approximate bisector, the candidate moves on to the following edge.
    The walk then crosses the candidate.  ``memo`` is an optional table
    from ``precompute_obtuse_bits``.
    """
    px, py, budget = _prepare(m, start, p, budget)
    if memo is not None and len(memo) != m.n_halfedges:
        raise MeshError("obtuse-bit table does not match the mesh")
    rec = _Recorder(m, start, budget)
    g = _Geometry(m, px, py, rec.trace.counters)
    nxt, twin, face, outer = m.next, m.twin, m.face, m.outer_face
    step = rec.step

    e = start
    if g.right(e):
        t = twin[e]
        ok = step(t, Action.CROSS_TWIN)
        if face[t] == outer:
            return WalkResult.outside(e), rec.trace
        e = t
        if not ok:
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
    e1 = nxt[e]
    ok = step(e1, Action.ADVANCE_NEXT)
    while e != e1:
        if not ok:
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
        if g.right(e1):
            e2 = nxt[e1]
            while g.obtuse(e1, e2, memo) and g.left_of_bisector(e1, e2):
                e1, e2 = e2, nxt[e2]
                if not step(e1, Action.SHIFT_PAIR):
                    return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
            e = twin[e1]
            ok = step(e, Action.CROSS_TWIN)
            if face[e] == outer:
                return WalkResult.outside(e1), rec.trace
            e1 = nxt[e]
            ok = step(e1, Action.ADVANCE_NEXT) and ok
        else:
            e1 = nxt[e1]
            ok = step(e1, Action.ADVANCE_NEXT)
    return WalkResult.located(face[e]), rec.trace


# -- abstract walk --------------------------------------------------------------

class Selector:
    """Chooses one half-edge from the candidate set of the abstract walk."""

    name = "selector"

    def reset(self) -> None:
        pass

    def select(self, candidates: list[int], dist) -> int:
        raise NotImplementedError


class FirstCandidate(Selector):
    name = "first"

    def select(self, candidates, dist):
        return candidates[0]


class SeededRandom(Selector):
    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.reset()

    def reset(self) -> None:
        self.rng = SplitMix64(self.seed)

    def select(self, candidates, dist):
        return self.rng.choice(candidates)


class GreedyMinDistance(Selector):
    """The candidate of least celestial distance (first one on ties)."""

    name = "greedy"

    def select(self, candidates, dist):
        best = candidates[0]
        for e in candidates[1:]:
            if dist.less(e, best):
                best = e
        return best


def make_selector(name: str, seed: int = 0) -> Selector:
    if name == "first":
        return FirstCandidate()
    if name == "random":
        return SeededRandom(seed)
    if name == "greedy":
        return GreedyMinDistance()
    raise ValueError(f"unknown selector {name!r}")


class _Distances:
    """Memoised celestial distances of undirected edges to p, with a comparison counter."""

    def __init__(self, m: Mesh, p: tuple[float, float], counters: Counters):
        self.m = m
        self.p = p
        self.cache: dict[int, CelestialDistance] = {}
        self.c = counters

    def __call__(self, e: int) -> CelestialDistance:
        key = min(e, self.m.twin[e])
        d = self.cache.get(key)
        if d is None:
            a, b = self.m.segment(key)
            d = self.cache[key] = celestial_distance(a, b, self.p)
        return d

    def less(self, e1: int, e2: int) -> bool:
        self.c.distance_comparisons += 1
        return cd_less(self(e1), self(e2))


def abstract_walk(m: Mesh, start: int, p: Sequence[float], sel: Selector | None = None,
                  budget: int | None = None) -> tuple[WalkResult, WalkTrace]:
    """Walk by explicit celestial distances, materialising every candidate set.

    From the current entry edge e the candidates are the twins of all edges
    of face(e) that have p strictly on their right and a strictly smaller
    celestial distance than e.  The path to a selected candidate is recorded
    as next-moves around the face followed by the twin crossing.
    """
    px, py, budget = _prepare(m, start, p, budget)
    sel = sel if sel is not None else FirstCandidate()
    sel.reset()
    rec = _Recorder(m, start, budget)
    g = _Geometry(m, px, py, rec.trace.counters)
    dist = _Distances(m, (px, py), rec.trace.counters)
    nxt, twin, face, outer = m.next, m.twin, m.face, m.outer_face

    e = start
    if g.right(e):
        t = twin[e]
        ok = rec.step(t, Action.CROSS_TWIN)
        if face[t] == outer:
            return WalkResult.outside(e), rec.trace
        if not ok:
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
        e = t
    candidates = [e]
    while candidates:
        chosen = sel.select(candidates, dist)
        if chosen != e:
            exit_edge = twin[chosen]
            cur = e
            while cur != exit_edge:
                cur = nxt[cur]
                if not rec.step(cur, Action.ADVANCE_NEXT):
                    return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
            ok = rec.step(chosen, Action.CROSS_TWIN)
            if face[chosen] == outer:
                return WalkResult.outside(exit_edge), rec.trace
            if not ok:
                return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
        e = chosen
        candidates = []
        e1 = nxt[e]
        while e1 != e:
            if g.right(e1) and dist.less(e1, e):
                candidates.append(twin[e1])
            e1 = nxt[e1]
    return WalkResult.located(face[e]), rec.trace


# -- visibility walk ------------------------------------------------------------

class Visibility(str, enum.Enum):
    DETERMINISTIC_FIRST = "first"
    STOCHASTIC = "stochastic"


def visibility_walk(m: Mesh, start: int, p: Sequence[float],
                    variant: Visibility | str = Visibility.DETERMINISTIC_FIRST,
                    budget: int | None = None, seed: int = 0) -> tuple[WalkResult, WalkTrace]:
    """Cross any edge that has p strictly on its far side.

    The deterministic variant takes the first such edge in next-order after
    the entry edge and aborts with CycleDetected as soon as an entry edge
    repeats (being oblivious, it would then loop forever).  The stochastic
    variant picks uniformly among all such edges; a repeated entry does not
    prove a loop there, so only the budget bounds it.
    """
    px, py, budget = _prepare(m, start, p, budget)
    variant = Visibility(variant)
    rng = SplitMix64(seed) if variant is Visibility.STOCHASTIC else None
    rec = _Recorder(m, start, budget)
    g = _Geometry(m, px, py, rec.trace.counters)
    nxt, twin, face, outer = m.next, m.twin, m.face, m.outer_face

    e = start
    if g.right(e):
        t = twin[e]
        ok = rec.step(t, Action.CROSS_TWIN)
        if face[t] == outer:
            return WalkResult.outside(e), rec.trace
        if not ok:
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
        e = t
    entries = {e}
    while True:
        if rng is None:
            chosen = None
            e1 = nxt[e]
            while e1 != e:
                if g.right(e1):
                    chosen = e1
                    break
                e1 = nxt[e1]
        else:
            options = []
            e1 = nxt[e]
            while e1 != e:
                if g.right(e1):
                    options.append(e1)
                e1 = nxt[e1]
            chosen = rng.choice(options) if options else None
        if chosen is None:
            return WalkResult.located(face[e]), rec.trace
        cur = e
        while cur != chosen:
            cur = nxt[cur]
            if not rec.step(cur, Action.ADVANCE_NEXT):
                return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
        e = twin[chosen]
        ok = rec.step(e, Action.CROSS_TWIN)
        if face[e] == outer:
            return WalkResult.outside(chosen), rec.trace
        if rng is None:
            if e in entries:
                return WalkResult.aborted(AbortReason.CYCLE_DETECTED), rec.trace
            entries.add(e)
        if not ok:
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace


# -- straight walk --------------------------------------------------------------

def straight_walk(m: Mesh, start: int, p: Sequence[float],
                  budget: int | None = None) -> tuple[WalkResult, WalkTrace]:
    """Visit the faces crossed by the segment from the start-face centroid q to p.

    A vertex lying exactly on the line q -> p is treated as lying
    infinitesimally to its left, which makes the exit edge of every face
    unique.  The walk stops in the first face whose exit edge does not have
    p strictly beyond it.
    """
    px, py, budget = _prepare(m, start, p, budget)
    rec = _Recorder(m, start, budget)
    c = rec.trace.counters
    pts, origin, nxt, twin, face, outer = m.points, m.origin, m.next, m.twin, m.face, m.outer_face
    qx, qy = m.centroid(face[start])
    if qx == px and qy == py:
        return WalkResult.located(face[start]), rec.trace

    def left_of_line(v: int) -> bool:
        c.orientation_tests += 1
        x, y = pts[v]
        return orient_sign(qx, qy, px, py, x, y) >= 0

    e = start
    # find the exit edge of the start face: origin right of q->p, target left
    side = left_of_line(origin[e])
    while True:
        t_side = left_of_line(origin[twin[e]])
        if not side and t_side:
            break
        side = t_side
        e = nxt[e]
        if not rec.step(e, Action.ADVANCE_NEXT):
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
    while True:
        c.orientation_tests += 1
        a, b = pts[origin[e]], pts[origin[twin[e]]]
        if orient_sign(a[0], a[1], b[0], b[1], px, py) >= 0:
            return WalkResult.located(face[e]), rec.trace
        exit_edge = e
        e = twin[e]
        ok = rec.step(e, Action.CROSS_TWIN)
        if face[e] == outer:
            return WalkResult.outside(exit_edge), rec.trace
        if not ok:
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
        # e runs from a left vertex to a right vertex; the exit edge starts at the
        # last right vertex, so scan forward until a left target appears
        e = nxt[e]
        if not rec.step(e, Action.ADVANCE_NEXT):
            return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace
        while not left_of_line(origin[twin[e]]):
            e = nxt[e]
            if not rec.step(e, Action.ADVANCE_NEXT):
                return WalkResult.aborted(AbortReason.BUDGET_EXHAUSTED), rec.trace


# -- dispatch and serialisation ---------------------------------------------------

WALKS = ("celestial", "abstract", "visibility", "straight")


def run_walk(m: Mesh, name: str, start: int, p: Sequence[float], *, budget: int | None = None,
             selector: str = "first", seed: int = 0, memo=None,
             stochastic: bool = False) -> tuple[WalkResult, WalkTrace]:
    if name == "celestial":
        return celestial_walk(m, start, p, budget, memo)
    if name == "abstract":
        return abstract_walk(m, start, p, make_selector(selector, seed), budget)
    if name == "visibility":
        variant = Visibility.STOCHASTIC if stochastic else Visibility.DETERMINISTIC_FIRST
        return visibility_walk(m, start, p, variant, budget, seed)
    if name == "straight":
        return straight_walk(m, start, p, budget)
    raise ValueError(f"unknown walk {name!r}; expected one of {', '.join(WALKS)}")


def dumps_trace(result: WalkResult, trace: WalkTrace, *, walk: str = "",
                query: Sequence[float] | None = None) -> str:
    c = trace.counters
    obj = {
        "walk": walk,
        "start": trace.start,
        "query": [float(query[0]), float(query[1])] if query is not None else None,
        "result": result.to_dict(),
        "counters": {
            "orientation_tests": c.orientation_tests,
            "obtuse_tests": c.obtuse_tests,
            "memo_lookups": c.memo_lookups,
            "distance_comparisons": c.distance_comparisons,
        },
        "visited_faces": list(trace.visited_faces),
        "steps": [{"edge": e, "action": a.value} for e, a in trace.steps],
    }
    return json.dumps(obj, indent=1) + "\n"


def loads_trace(text: str) -> tuple[WalkResult, WalkTrace, dict[str, Any]]:
    obj = json.loads(text)
    trace = WalkTrace(
        start=obj["start"],
        steps=[(s["edge"], Action(s["action"])) for s in obj["steps"]],
        visited_faces=list(obj["visited_faces"]),
        counters=Counters(**obj["counters"]),
    )
    meta = {"walk": obj.get("walk", ""), "query": obj.get("query")}
    return WalkResult.from_dict(obj["result"]), trace, meta
