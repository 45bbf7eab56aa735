"""Seeded constructors of convex subdivisions used as walk test beds."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .geometry import (
    GeometryError,
    InvalidPolygonError,
    Point,
    check_convex_polygon,
    dot_sign,
    incircle_sign,
    orient_sign,
)
from .mesh import Mesh, MeshError, build_mesh, loads_mesh, dumps_mesh, point_in_face
from .rng import SplitMix64

INF = -1


def hex_grid(rows: int, cols: int, edge_len: float = 1.0, fill_to_hull: bool = False) -> Mesh:
    """rows x cols pointy-top regular hexagons, odd rows shifted right by half a cell.

    Vertices are keyed on an integer lattice (units of half a cell width
    horizontally, half an edge vertically) so shared corners coincide exactly.

    The zigzag outline of a hex patch is not convex, so a walk toward an
    interior point may legitimately step out of the patch.  With
    ``fill_to_hull`` the pockets between the outline and its convex hull are
    triangulated; the hexagons keep face ids ``0 .. rows*cols - 1`` and the
    filler triangles follow.
    """
    if rows < 1 or cols < 1:
        raise ValueError("hex_grid needs rows >= 1 and cols >= 1")
    if not edge_len > 0:
        raise ValueError("edge_len must be positive")
    hx = math.sqrt(3.0) * edge_len / 2.0
    hy = edge_len / 2.0
    ids: dict[tuple[int, int], int] = {}
    points: list[Point] = []
    faces = []
    corners = ((0, -2), (1, -1), (1, 1), (0, 2), (-1, 1), (-1, -1))
    for r in range(rows):
        for c in range(cols):
            cx, cy = 2 * c + 1 + (r % 2), 3 * r + 2
            cyc = []
            for dx, dy in corners:
                key = (cx + dx, cy + dy)
                if key not in ids:
                    ids[key] = len(points)
                    points.append((key[0] * hx, key[1] * hy))
                cyc.append(ids[key])
            faces.append(cyc)
    if fill_to_hull:
        faces.extend(_hull_pockets(points, faces))
    return build_mesh(points, faces)


def _convex_hull_ccw(points: Sequence[Point], ids: Sequence[int]) -> list[int]:
    """Monotone chain hull of the given vertex ids, keeping collinear boundary points."""
    order = sorted(set(ids), key=lambda i: points[i])

    def turn(a, b, c):
        pa, pb, pc = points[a], points[b], points[c]
        return orient_sign(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) < 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) < 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _ear_clip(points: Sequence[Point], poly: list[int]) -> list[list[int]]:
    """Triangulate a simple CCW polygon by ear clipping with exact predicates."""

    def turn(a, b, c):
        pa, pb, pc = points[a], points[b], points[c]
        return orient_sign(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1])

    poly = list(poly)
    out = []
    while len(poly) > 3:
        n = len(poly)
        for k in range(n):
            a, b, c = poly[k - 1], poly[k], poly[(k + 1) % n]
            if turn(a, b, c) <= 0:
                continue
            if any(turn(a, b, v) >= 0 and turn(b, c, v) >= 0 and turn(c, a, v) >= 0
                   for v in poly if v not in (a, b, c)):
                continue
            out.append([a, b, c])
            del poly[k]
            break
        else:
            raise MeshError("pocket polygon has no ear")
    if turn(*poly) <= 0:
        raise MeshError("degenerate pocket triangle")
    out.append(poly)
    return out


def _hull_pockets(points: Sequence[Point], faces: Sequence[Sequence[int]]) -> list[list[int]]:
    directed = set()
    for cyc in faces:
        for i in range(len(cyc)):
            directed.add((cyc[i], cyc[(i + 1) % len(cyc)]))
    succ = {u: v for (u, v) in directed if (v, u) not in directed}
    hull = _convex_hull_ccw(points, list(succ))
    on_hull = set(hull)
    out = []
    for i, h in enumerate(hull):
        h_next = hull[(i + 1) % len(hull)]
        chain = [h]
        while chain[-1] != h_next:
            chain.append(succ[chain[-1]])
            if chain[-1] in on_hull and chain[-1] != h_next:
                raise MeshError("boundary and hull orders disagree")
        if len(chain) > 2:
            out.extend(_ear_clip(points, chain[::-1]))
    return out


def random_points(n: int, seed: int, bbox: Sequence[float] = (0.0, 0.0, 1.0, 1.0)) -> list[Point]:
    rng = SplitMix64(seed)
    x0, y0, x1, y1 = bbox
    return [(rng.uniform(x0, x1), rng.uniform(y0, y1)) for _ in range(n)]


# -- triangulation kernel ------------------------------------------------------

class _Triangulation:
    """Mutable triangle soup with a directed-edge index; INF marks ghost vertices."""

    def __init__(self, points: Sequence[Point]):
        self.points = points
        self.tris: list[list[int] | None] = []
        self.emap: dict[tuple[int, int], int] = {}

    def add(self, a: int, b: int, c: int, slot: int | None = None) -> int:
        if slot is None:
            slot = len(self.tris)
            self.tris.append([a, b, c])
        else:
            self.tris[slot] = [a, b, c]
        self.emap[(a, b)] = slot
        self.emap[(b, c)] = slot
        self.emap[(c, a)] = slot
        return slot

    def remove(self, t: int) -> None:
        a, b, c = self.tris[t]
        for key in ((a, b), (b, c), (c, a)):
            if self.emap.get(key) == t:
                del self.emap[key]
        self.tris[t] = None

    def opposite(self, t: int, u: int, v: int) -> int:
        a, b, c = self.tris[t]
        for w in (a, b, c):
            if w != u and w != v:
                return w
        raise AssertionError("triangle does not contain edge")

    def orient(self, u: int, v: int, w: int) -> int:
        pu, pv, pw = self.points[u], self.points[v], self.points[w]
        return orient_sign(pu[0], pu[1], pv[0], pv[1], pw[0], pw[1])

    def flip_quad(self, u: int, v: int) -> tuple[int, int, int, int] | None:
        """(t1, t2, a, b) for the finite triangles sharing u->v / v->u, or None."""
        t1 = self.emap.get((u, v))
        t2 = self.emap.get((v, u))
        if t1 is None or t2 is None:
            return None
        a = self.opposite(t1, u, v)
        b = self.opposite(t2, v, u)
        if INF in (a, b, u, v):
            return None
        return t1, t2, a, b

    def strictly_convex_quad(self, u: int, v: int, a: int, b: int) -> bool:
        # quad u, b, v, a in CCW order
        return (self.orient(u, b, v) > 0 and self.orient(b, v, a) > 0
                and self.orient(v, a, u) > 0 and self.orient(a, u, b) > 0)

    def flip(self, u: int, v: int) -> None:
        t1, t2, a, b = self.flip_quad(u, v)
        self.remove(t1)
        self.remove(t2)
        self.add(u, b, a, t1)
        self.add(b, v, a, t2)

    def finite_triangles(self) -> list[list[int]]:
        return [t for t in self.tris if t is not None and INF not in t]

    def to_mesh(self) -> Mesh:
        faces = []
        for t in self.finite_triangles():
            k = t.index(min(t))
            faces.append(t[k:] + t[:k])
        faces.sort()
        return build_mesh(self.points, faces)


def _hilbert_index(x: int, y: int, order: int) -> int:
    d = 0
    s = 1 << (order - 1)
    while s > 0:
        rx = 1 if x & s else 0
        ry = 1 if y & s else 0
        d += s * s * ((3 * rx) ^ ry)
        if ry == 0:
            if rx == 1:
                x = s - 1 - x
                y = s - 1 - y
            x, y = y, x
        s >>= 1
    return d


def _hilbert_order(points: Sequence[Point]) -> list[int]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0) or 1.0
    side = (1 << 16) - 1
    keys = []
    for i, (x, y) in enumerate(points):
        gx = int((x - x0) / span * side)
        gy = int((y - y0) / span * side)
        keys.append((_hilbert_index(gx, gy, 16), i))
    keys.sort()
    return [i for _, i in keys]


def delaunay_triangulate(points: Sequence[Sequence[float]]) -> Mesh:
    """Delaunay triangulation by incremental Bowyer-Watson insertion.

    Points are inserted along a Hilbert curve; each is located by a
    visibility walk from the previous insertion and the conflict cavity is
    re-triangulated from it.  The hull is closed by ghost triangles sharing
    a vertex at infinity.  Exactly cocircular quadrilaterals are then
    normalised: the diagonal with the lexicographically smaller sorted
    vertex-id pair is kept.  Vertex ids follow input order.
    """
    pts: list[Point] = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise GeometryError("need at least 3 points")
    if len(set(pts)) != len(pts):
        raise GeometryError("duplicate input points")
    order = _hilbert_order(pts)
    tri = _Triangulation(pts)

    a, b = order[0], order[1]
    k = next((j for j in range(2, len(order)) if tri.orient(a, b, order[j]) != 0), None)
    if k is None:
        raise GeometryError("all points are collinear")
    c = order[k]
    if tri.orient(a, b, c) < 0:
        a, b = b, a
    last = tri.add(a, b, c)
    for u, v in ((a, b), (b, c), (c, a)):
        tri.add(v, u, INF)
    rest = order[2:k] + order[k + 1:]
    for i in rest:
        last = _insert(tri, i, last)

    _normalise_cocircular(tri)
    return tri.to_mesh()


def _in_conflict(tri: _Triangulation, t: int, i: int) -> bool:
    a, b, c = tri.tris[t]
    pts = tri.points
    p = pts[i]
    if c != INF:
        return incircle_sign(pts[a], pts[b], pts[c], p) > 0
    s = tri.orient(a, b, i)
    if s != 0:
        return s > 0
    pa, pb = pts[a], pts[b]
    return (dot_sign(pa[0], pa[1], p[0], p[1], pa[0], pa[1], pb[0], pb[1]) > 0
            and dot_sign(pb[0], pb[1], p[0], p[1], pb[0], pb[1], pa[0], pa[1]) > 0)


def _insert(tri: _Triangulation, i: int, start: int) -> int:
    pts = tri.points
    t = start
    # visibility walk; acyclic on a Delaunay triangulation
    while True:
        a, b, c = tri.tris[t]
        if c == INF:
            break
        for u, v in ((a, b), (b, c), (c, a)):
            if tri.orient(u, v, i) < 0:
                t = tri.emap[(v, u)]
                break
        else:
            break
    if INF not in tri.tris[t]:
        for v in tri.tris[t]:
            if pts[v] == pts[i]:
                raise GeometryError(f"duplicate point {pts[i]!r}")

    cavity = {t}
    tested = {t: True}
    stack = [t]
    boundary = []
    while stack:
        s = stack.pop()
        a, b, c = tri.tris[s]
        for u, v in ((a, b), (b, c), (c, a)):
            n = tri.emap[(v, u)]
            if n in cavity:
                continue
            hit = tested.get(n)
            if hit is None:
                hit = tested[n] = _in_conflict(tri, n, i)
            if hit:
                cavity.add(n)
                stack.append(n)
            else:
                boundary.append((u, v))
    for s in sorted(cavity):
        tri.remove(s)
    slots = sorted(cavity)
    new = None
    for u, v in boundary:
        slot = slots.pop() if slots else None
        if u == INF:
            t = tri.add(v, i, INF, slot)
        elif v == INF:
            t = tri.add(i, u, INF, slot)
        else:
            t = tri.add(u, v, i, slot)
            new = t
    return new if new is not None else t


def _normalise_cocircular(tri: _Triangulation) -> None:
    pts = tri.points
    queue = deque(sorted({(min(u, v), max(u, v)) for (u, v) in tri.emap if INF not in (u, v)}))
    while queue:
        u, v = queue.popleft()
        q = tri.flip_quad(u, v)
        if q is None:
            continue
        t1, t2, a, b = q
        if (min(a, b), max(a, b)) >= (u, v):
            continue
        if incircle_sign(pts[u], pts[v], pts[a], pts[b]) != 0:
            continue
        tri.flip(u, v)
        for x, y in ((u, a), (a, v), (v, b), (b, u)):
            queue.append((min(x, y), max(x, y)))


def _triangulation_of(m: Mesh) -> _Triangulation:
    tri = _Triangulation(m.points)
    for cyc in m.face_cycles():
        if len(cyc) != 3:
            raise MeshError("mesh is not a triangulation")
        tri.add(*cyc)
    return tri


def random_flip_perturb(m: Mesh, k: int, seed: int) -> Mesh:
    """Apply k random legal diagonal flips (surrounding quad strictly convex)."""
    tri = _triangulation_of(m)
    if k <= 0:
        return tri.to_mesh()
    rng = SplitMix64(seed)
    done = 0
    attempts = 0
    limit = 1000 * (k + 10)
    while done < k:
        attempts += 1
        if attempts > limit:
            raise MeshError("no legal flip found")
        t = rng.randrange(len(tri.tris))
        j = rng.randrange(3)
        a, b, c = tri.tris[t]
        u, v = ((a, b), (b, c), (c, a))[j]
        q = tri.flip_quad(u, v)
        if q is None:
            continue
        _, _, x, y = q
        if not tri.strictly_convex_quad(u, v, x, y):
            continue
        tri.flip(u, v)
        done += 1
    return tri.to_mesh()


def non_delaunay_edges(m: Mesh) -> list[tuple[int, int]]:
    """Interior edges whose opposite vertex lies strictly inside the neighbour's circumcircle."""
    bad = []
    for e in range(m.n_halfedges):
        t = m.twin[e]
        if e > t or m.is_outer(m.face[e]) or m.is_outer(m.face[t]):
            continue
        a, b = m.origin[e], m.origin[t]
        c = m.origin[m.twin[m.next[e]]]
        d = m.origin[m.twin[m.next[t]]]
        pts = m.points
        if incircle_sign(pts[a], pts[b], pts[c], pts[d]) > 0:
            bad.append((a, b))
    return bad


def chord_split_subdivision(n_splits: int, seed: int,
                            bbox: Sequence[float] = (0.0, 0.0, 1.0, 1.0)) -> Mesh:
    """Start from the rectangle and split random faces by random chords.

    Chord endpoints sit at parameter t in [0.1, 0.9] along two distinct
    edges of the face.  On a boundary edge the endpoint lies on the edge.
    On an interior edge it is pushed into the face being split by 1-5% of
    the edge length, so the neighbour gains a strictly convex corner instead
    of a straight one.  Draws that would break strict convexity are redrawn.
    """
    if n_splits < 0:
        raise ValueError("n_splits must be >= 0")
    x0, y0, x1, y1 = map(float, bbox)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("empty bounding box")
    rng = SplitMix64(seed)
    points: list[Point] = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    faces: list[list[int]] = [[0, 1, 2, 3]]
    emap: dict[tuple[int, int], int] = {}

    def index(f):
        cyc = faces[f]
        for s in range(len(cyc)):
            emap[(cyc[s], cyc[(s + 1) % len(cyc)])] = f

    def unindex(f):
        cyc = faces[f]
        for s in range(len(cyc)):
            emap.pop((cyc[s], cyc[(s + 1) % len(cyc)]), None)

    index(0)

    def convex(cyc, extra):
        try:
            check_convex_polygon([extra.get(v) or points[v] for v in cyc])
        except InvalidPolygonError:
            return False
        return True

    for _ in range(n_splits):
        for _attempt in range(1000):
            f = rng.randrange(len(faces))
            cyc = faces[f]
            k = len(cyc)
            i = rng.randrange(k)
            j = rng.randrange(k - 1)
            if j >= i:
                j += 1
            if i > j:
                i, j = j, i
            new_pts = {}
            touched: dict[int, list[int]] = {}
            ids = []
            for s in (i, j):
                u, v = cyc[s], cyc[(s + 1) % k]
                (ux, uy), (vx, vy) = points[u], points[v]
                t = rng.uniform(0.1, 0.9)
                mx, my = ux + t * (vx - ux), uy + t * (vy - uy)
                nb = emap.get((v, u))
                if nb is not None:
                    lam = rng.uniform(0.01, 0.05)
                    mx, my = mx - lam * (vy - uy), my + lam * (vx - ux)
                vid = len(points) + len(new_pts)
                new_pts[vid] = (mx, my)
                ids.append(vid)
                if nb is not None:
                    ncyc = touched.get(nb, faces[nb])
                    pos = ncyc.index(v)
                    touched[nb] = ncyc[:pos + 1] + [vid] + ncyc[pos + 1:]
            m1, m2 = ids
            part_a = [m1] + cyc[i + 1:j + 1] + [m2]
            part_b = [m2] + [cyc[(j + 1 + s) % k] for s in range(k - (j - i))] + [m1]
            if not (convex(part_a, new_pts) and convex(part_b, new_pts)
                    and all(convex(c, new_pts) for c in touched.values())):
                continue
            for vid in sorted(new_pts):
                points.append(new_pts[vid])
            unindex(f)
            for nb in touched:
                unindex(nb)
            faces[f] = part_a
            faces.append(part_b)
            for nb, ncyc in touched.items():
                faces[nb] = ncyc
            index(f)
            index(len(faces) - 1)
            for nb in touched:
                index(nb)
            break
        else:
            raise MeshError("could not place a convex chord")
    return build_mesh(points, faces)


def delaunay_mesh(n: int, seed: int) -> Mesh:
    """Delaunay triangulation of n uniform random points in the unit square."""
    return delaunay_triangulate(random_points(n, seed))


def flipped_mesh(n: int, k: int, seed: int) -> Mesh:
    """A Delaunay mesh of n points followed by k random legal flips."""
    rng = SplitMix64(seed)
    return random_flip_perturb(delaunay_mesh(n, rng.next_u64()), k, rng.next_u64())


@dataclass(frozen=True)
class LoopInstance:
    """A mesh, start half-edge and query on which the first-edge visibility walk cycles."""

    mesh: Mesh
    start: int
    query: Point

    def dumps(self) -> str:
        return dumps_mesh(self.mesh, start=self.start, query=list(self.query))

    @classmethod
    def loads(cls, text: str) -> "LoopInstance":
        m, extra = loads_mesh(text)
        if "start" not in extra or "query" not in extra:
            raise MeshError('loop fixture needs "start" and "query"')
        qx, qy = extra["query"]
        return cls(m, int(extra["start"]), (float(qx), float(qy)))


def random_point_in_face(m: Mesh, f: int, rng: SplitMix64) -> Point:
    """A random strictly interior point of convex face f (random positive vertex weights)."""
    vs = m.face_vertices(f)
    ws = [rng.random() + 1e-3 for _ in vs]
    s = math.fsum(ws)
    return (math.fsum(w * m.points[v][0] for w, v in zip(ws, vs)) / s,
            math.fsum(w * m.points[v][1] for w, v in zip(ws, vs)) / s)


def find_visibility_loop_instance(max_meshes: int = 10_000, seed: int = 0, *,
                                  n_points: int = 20, flips_per_point: int = 3,
                                  queries_per_mesh: int = 20,
                                  perturb: bool = True) -> LoopInstance | None:
    """Search seeded random triangulations for a looping visibility walk.

    Each candidate mesh is the Delaunay triangulation of ``n_points``
    uniform points, followed (when ``perturb``) by ``flips_per_point * n``
    random legal flips.  Random interior queries and start edges are tried;
    the first instance where the deterministic visibility walk repeats an
    entry edge while the celestial walk locates the query is returned.
    """
    from .walks import AbortReason, Visibility, celestial_walk, visibility_walk

    if max_meshes <= 0 or queries_per_mesh <= 0:
        raise ValueError("search budgets must be positive")
    rng = SplitMix64(seed)
    for _ in range(max_meshes):
        mesh_seed = rng.next_u64()
        m = delaunay_mesh(n_points, mesh_seed)
        if perturb:
            m = random_flip_perturb(m, flips_per_point * n_points, rng.next_u64())
        starts = m.interior_halfedges()
        for _ in range(queries_per_mesh):
            p = random_point_in_face(m, rng.randrange(m.outer_face), rng)
            start = rng.choice(starts)
            res, _ = visibility_walk(m, start, p, Visibility.DETERMINISTIC_FIRST)
            if res.reason is not AbortReason.CYCLE_DETECTED:
                continue
            res, _ = celestial_walk(m, start, p)
            if res.is_located and point_in_face(m, res.face, p):
                return LoopInstance(m, start, p)
    return None
