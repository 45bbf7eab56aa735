"""Index-based half-edge meshes of convex planar subdivisions.

Half-edges, vertices and faces are dense integer ids.  Interior faces are
numbered in the order their vertex cycles were given; the single outer
face (the complement of the domain) always comes last.  ``target`` is not
stored: it is ``origin[twin[e]]``.
"""

from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .geometry import (
    DegenerateEdgeError,
    GeometryError,
    InvalidInputError,
    InvalidPolygonError,
    Point,
    check_convex_polygon,
    dot_sign,
    orient_sign,
)


class MeshError(GeometryError):
    """A face list that does not describe a valid convex subdivision."""


class Move(enum.Enum):
    NEXT = "next"
    TWIN = "twin"


@dataclass(frozen=True, eq=True)
class Mesh:
    points: tuple[Point, ...]
    origin: tuple[int, ...]
    twin: tuple[int, ...]
    next: tuple[int, ...]
    face: tuple[int, ...]
    face_edge: tuple[int, ...]
    outer_face: int

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @property
    def n_halfedges(self) -> int:
        return len(self.origin)

    @property
    def n_faces(self) -> int:
        """Number of faces including the outer face."""
        return len(self.face_edge)

    @property
    def interior_faces(self) -> range:
        return range(self.outer_face)

    def is_outer(self, f: int) -> bool:
        return f == self.outer_face

    def target(self, e: int) -> int:
        return self.origin[self.twin[e]]

    def segment(self, e: int) -> tuple[Point, Point]:
        return self.points[self.origin[e]], self.points[self.origin[self.twin[e]]]

    def interior_halfedges(self) -> list[int]:
        return [e for e in range(self.n_halfedges) if self.face[e] != self.outer_face]

    def face_vertices(self, f: int) -> list[int]:
        return [self.origin[e] for e in face_perimeter(self, f)]

    def face_cycles(self) -> list[list[int]]:
        return [self.face_vertices(f) for f in self.interior_faces]

    def centroid(self, f: int) -> Point:
        vs = self.face_vertices(f)
        return (math.fsum(self.points[v][0] for v in vs) / len(vs),
                math.fsum(self.points[v][1] for v in vs) / len(vs))

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return min(xs), min(ys), max(xs), max(ys)

    def contains_point(self, p: Sequence[float]) -> bool:
        """Closed containment in the domain (union of interior faces), by crossing number."""
        inside = False
        px, py = p[0], p[1]
        for e in face_perimeter(self, self.outer_face):
            (ax, ay), (bx, by) = self.segment(e)
            s = orient_sign(ax, ay, bx, by, px, py)
            if s == 0 and min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by):
                return True
            # the +x ray from p crosses an upward edge iff p is left of it
            if (ay > py) != (by > py) and (by > ay) == (s > 0):
                inside = not inside
        return inside


def navigate(m: Mesh, e: int, move: Move) -> int:
    if not 0 <= e < m.n_halfedges:
        raise IndexError(f"invalid half-edge id {e}")
    move = Move(move)
    return m.next[e] if move is Move.NEXT else m.twin[e]


def face_perimeter(m: Mesh, f: int) -> list[int]:
    """Half-edges of face f in next-order, starting at its designated edge."""
    if not 0 <= f < m.n_faces:
        raise IndexError(f"invalid face id {f}")
    start = m.face_edge[f]
    out = [start]
    e = m.next[start]
    while e != start:
        out.append(e)
        if len(out) > m.n_halfedges:
            raise MeshError(f"next-orbit of face {f} does not close")
        e = m.next[e]
    return out


def point_in_face(m: Mesh, f: int, p: Sequence[float]) -> bool:
    """Closed containment of p in the convex interior face f."""
    if m.is_outer(f):
        raise MeshError("point_in_face is undefined for the outer face")
    pts, origin, twin = m.points, m.origin, m.twin
    px, py = p[0], p[1]
    for e in face_perimeter(m, f):
        a = pts[origin[e]]
        b = pts[origin[twin[e]]]
        if orient_sign(a[0], a[1], b[0], b[1], px, py) < 0:
            return False
    return True


def precompute_obtuse_bits(m: Mesh) -> tuple[bool | None, ...]:
    """Per half-edge e, whether the corner at target(e) of face(e) is strictly obtuse.

    Entries of outer-face half-edges are None.
    """
    pts, origin, twin, nxt = m.points, m.origin, m.twin, m.next
    bits: list[bool | None] = [None] * m.n_halfedges
    for e in range(m.n_halfedges):
        if m.face[e] == m.outer_face:
            continue
        a, b, c = pts[origin[e]], pts[origin[twin[e]]], pts[origin[twin[nxt[e]]]]
        bits[e] = dot_sign(a[0], a[1], b[0], b[1], b[0], b[1], c[0], c[1]) > 0
    return tuple(bits)


def _as_point(p: Sequence[float]) -> Point:
    if len(p) != 2:
        raise InvalidInputError(f"expected an (x, y) pair, got {p!r}")
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError(f"non-finite point {p!r}")
    return x, y


def build_mesh(points: Iterable[Sequence[float]], face_cycles: Iterable[Sequence[int]]) -> Mesh:
    """Build the half-edge mesh of CCW convex faces meeting edge to edge.

    Twins are matched by directed edge (u, v) <-> (v, u).  Directed edges
    without a partner border the outer face, whose half-edges are appended
    after all interior half-edges and linked into a single clockwise ring.
    """
    pts = tuple(_as_point(p) for p in points)
    cycles = [list(map(int, c)) for c in face_cycles]
    if not cycles:
        raise MeshError("no faces given")

    origin: list[int] = []
    nxt: list[int] = []
    face: list[int] = []
    face_edge: list[int] = []
    directed: dict[tuple[int, int], int] = {}
    for f, cyc in enumerate(cycles):
        k = len(cyc)
        if k < 3:
            raise MeshError(f"face {f} has fewer than 3 vertices")
        for v in cyc:
            if not 0 <= v < len(pts):
                raise MeshError(f"face {f} references unknown vertex {v}")
        if len(set(cyc)) != k:
            raise MeshError(f"face {f} repeats a vertex")
        try:
            check_convex_polygon([pts[v] for v in cyc])
        except DegenerateEdgeError as exc:
            raise MeshError(f"face {f}: {exc}") from exc
        except InvalidPolygonError as exc:
            raise MeshError(f"face {f} is not a strictly convex CCW polygon: {exc}") from exc
        base = len(origin)
        face_edge.append(base)
        for i, v in enumerate(cyc):
            w = cyc[(i + 1) % k]
            if (v, w) in directed:
                raise MeshError(f"directed edge ({v}, {w}) used twice (non-manifold)")
            directed[(v, w)] = base + i
            origin.append(v)
            nxt.append(base + (i + 1) % k)
            face.append(f)

    n_inner = len(origin)
    outer = len(cycles)
    twin = [-1] * n_inner
    outer_from: dict[int, int] = {}
    for (v, w), e in directed.items():
        t = directed.get((w, v))
        if t is not None:
            twin[e] = t
            continue
        # unmatched: create the outer half-edge w -> v
        h = len(origin)
        origin.append(w)
        twin.append(e)
        twin[e] = h
        face.append(outer)
        nxt.append(-1)
        if w in outer_from:
            raise MeshError(f"boundary is pinched at vertex {w}")
        outer_from[w] = h
    if not outer_from:
        raise MeshError("no boundary edges: the faces do not bound a finite domain")
    for h in range(n_inner, len(origin)):
        tgt = origin[twin[h]]
        if tgt not in outer_from:
            raise MeshError("boundary edges do not form a closed cycle")
        nxt[h] = outer_from[tgt]
    face_edge.append(n_inner)

    m = Mesh(pts, tuple(origin), tuple(twin), tuple(nxt), tuple(face), tuple(face_edge), outer)
    problems = validate_mesh(m)
    if problems:
        raise MeshError("; ".join(problems))
    return m


def validate_mesh(m: Mesh) -> list[str]:
    """Return every violated mesh invariant; an empty list means the mesh is valid."""
    out: list[str] = []
    nh = m.n_halfedges
    if not (len(m.twin) == len(m.next) == len(m.face) == nh):
        return ["half-edge tables have different lengths"]
    nf = m.n_faces
    if not 0 <= m.outer_face < nf:
        return [f"outer face id {m.outer_face} out of range"]
    for e in range(nh):
        t, n = m.twin[e], m.next[e]
        if not (0 <= t < nh and 0 <= n < nh):
            out.append(f"dangling pointer at e{e}")
            continue
        if t == e or m.twin[t] != e:
            out.append(f"twin involution broken at e{e}")
        if not 0 <= m.face[e] < nf:
            out.append(f"face id out of range at e{e}")
        elif m.face[n] != m.face[e]:
            out.append(f"next leaves the face at e{e}")
        if 0 <= m.twin[t] < nh and m.origin[t] != m.origin[n]:
            out.append(f"target/origin mismatch at e{e}")
        a = m.points[m.origin[e]]
        b = m.points[m.origin[t]]
        if a == b:
            out.append(f"degenerate edge e{e}")
    if out:
        return out
    if sorted(m.next) != list(range(nh)):
        return ["next is not a permutation"]

    seen = [False] * nh
    for f in range(nf):
        e0 = m.face_edge[f]
        if not 0 <= e0 < nh or m.face[e0] != f:
            out.append(f"face {f} edge pointer does not lie on face {f}")
            continue
        e = e0
        while True:
            seen[e] = True
            e = m.next[e]
            if e == e0:
                break
    if not all(seen):
        out.append("some next-orbit is not attached to any face")
    if out:
        return out

    for f in range(nf):
        vs = [m.points[m.origin[e]] for e in face_perimeter(m, f)]
        if f == m.outer_face:
            area2 = math.fsum(vs[i - 1][0] * vs[i][1] - vs[i][0] * vs[i - 1][1]
                              for i in range(len(vs)))
            if not area2 < 0:
                out.append("outer face boundary is not clockwise")
            continue
        try:
            check_convex_polygon(vs)
        except InvalidPolygonError:
            out.append(f"face {f} not strictly convex")

    n_edges = nh // 2
    if m.n_vertices - n_edges + nf != 2:
        out.append(f"Euler characteristic V-E+F = {m.n_vertices - n_edges + nf}, expected 2")
    return out


# -- text format -------------------------------------------------------------

def _num(x: float) -> str:
    return json.dumps(float(x))


def dumps_mesh(m: Mesh, **extra: Any) -> str:
    """Canonical text form: shortest round-trip decimals, faces in id order.

    Extra top-level keys (e.g. ``start`` and ``query`` of a loop fixture)
    are written after ``faces`` in the order given.
    """
    lines = ["{", '  "vertices": [']
    vs = [f"    [{_num(x)}, {_num(y)}]" for x, y in m.points]
    lines.append(",\n".join(vs))
    lines.append("  ],")
    lines.append('  "faces": [')
    fs = ["    [" + ", ".join(str(v) for v in cyc) + "]" for cyc in m.face_cycles()]
    lines.append(",\n".join(fs))
    lines.append("  ]" + ("," if extra else ""))
    items = list(extra.items())
    for i, (k, v) in enumerate(items):
        if isinstance(v, (tuple, list)):
            val = "[" + ", ".join(_num(x) for x in v) + "]"
        else:
            val = json.dumps(v)
        lines.append(f"  {json.dumps(k)}: {val}" + ("," if i < len(items) - 1 else ""))
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_mesh(text: str) -> tuple[Mesh, dict[str, Any]]:
    """Parse the text form; returns the mesh and any extra top-level keys."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeshError(f"not a mesh file: {exc}") from exc
    if not isinstance(obj, dict) or "vertices" not in obj or "faces" not in obj:
        raise MeshError('mesh file needs "vertices" and "faces"')
    m = build_mesh(obj["vertices"], obj["faces"])
    extra = {k: v for k, v in obj.items() if k not in ("vertices", "faces")}
    return m, extra


def write_mesh(m: Mesh, path: str | os.PathLike, **extra: Any) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_mesh(m, **extra))


def read_mesh(path: str | os.PathLike) -> tuple[Mesh, dict[str, Any]]:
    with open(path, encoding="utf-8") as fh:
        return loads_mesh(fh.read())
