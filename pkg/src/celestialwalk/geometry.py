"""Exact planar predicates and the celestial distance between a segment and a point.

All sign predicates use a floating-point filter with a static error bound
and fall back to rational arithmetic when the filter cannot certify the
sign, so results are exact for every finite double input.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Point = tuple[float, float]

_EPS = 2.0**-53
# Shewchuk's bound for x1*y1 +/- x2*y2 where each factor is a rounded difference.
_ERR_PRODUCTS = (3.0 + 16.0 * _EPS) * _EPS
_ERR_INCIRCLE = (10.0 + 96.0 * _EPS) * _EPS
# Below this the products may have underflowed and the relative bound is void.
_TINY = 2.0**-900


class GeometryError(ValueError):
    """Base class for rejected geometric input."""


class InvalidInputError(GeometryError):
    """Non-finite or malformed coordinates."""


class DegenerateEdgeError(GeometryError):
    """An edge or segment whose endpoints coincide."""


class InvalidPolygonError(GeometryError):
    """A polygon that is not simple, strictly convex and counter-clockwise."""


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


class Metric(enum.Enum):
    EUCLIDEAN = "euclidean"
    CELESTIAL = "celestial"


def _fraction(v: float) -> Fraction:
    try:
        return Fraction(v)
    except (ValueError, OverflowError, TypeError) as exc:
        raise InvalidInputError(f"coordinate {v!r} is not a finite number") from exc


def _exact_sign(x1, x0, y1, y0, z1, z0, w1, w0, subtract):
    t1 = (_fraction(x1) - _fraction(x0)) * (_fraction(y1) - _fraction(y0))
    t2 = (_fraction(z1) - _fraction(z0)) * (_fraction(w1) - _fraction(w0))
    d = t1 - t2 if subtract else t1 + t2
    return (d > 0) - (d < 0)


def orient_sign(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> int:
    """Sign of (b - a) x (c - a): +1 left turn, -1 right turn, 0 collinear."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    errbound = _ERR_PRODUCTS * (abs(detleft) + abs(detright))
    if errbound > _TINY:
        if det > errbound:
            return 1
        if -det > errbound:
            return -1
    return _exact_sign(ax, cx, by, cy, ay, cy, bx, cx, True)


def dot_sign(ax: float, ay: float, bx: float, by: float,
             cx: float, cy: float, dx: float, dy: float) -> int:
    """Sign of (b - a) . (d - c)."""
    t1 = (bx - ax) * (dx - cx)
    t2 = (by - ay) * (dy - cy)
    det = t1 + t2
    errbound = _ERR_PRODUCTS * (abs(t1) + abs(t2))
    if errbound > _TINY:
        if det > errbound:
            return 1
        if -det > errbound:
            return -1
    return _exact_sign(bx, ax, dx, cx, by, ay, dy, cy, False)


def orient(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> Orientation:
    return Orientation(orient_sign(a[0], a[1], b[0], b[1], c[0], c[1]))


def _check_edge(a, b) -> None:
    if a[0] == b[0] and a[1] == b[1]:
        raise DegenerateEdgeError(f"degenerate edge at {tuple(a)!r}")


def strictly_right(a: Sequence[float], b: Sequence[float], p: Sequence[float]) -> bool:
    """True iff p lies strictly to the right of the directed line a -> b."""
    _check_edge(a, b)
    return orient_sign(a[0], a[1], b[0], b[1], p[0], p[1]) < 0


def obtuse(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> bool:
    """True iff the corner a-b-c of a convex CCW perimeter is strictly obtuse.

    Equivalent to c lying strictly right of the line through b perpendicular
    to a -> b (pointing to its left), i.e. (b - a) . (c - b) > 0.
    A right angle is not obtuse.
    """
    _check_edge(a, b)
    _check_edge(b, c)
    return dot_sign(a[0], a[1], b[0], b[1], b[0], b[1], c[0], c[1]) > 0


def left_of_approx_bisector(a: Sequence[float], b: Sequence[float],
                            c: Sequence[float], p: Sequence[float]) -> bool:
    """True iff p is strictly left of the approximate bisector at corner b.

    The approximate bisector is the line from b in the direction of the
    right-hand normal of the baseline a -> c.  Writing u for that normal,
    orient(b, b + u, p) reduces to the sign of (c - a) . (p - b).
    Points on the line return False.
    """
    _check_edge(a, c)
    return dot_sign(a[0], a[1], c[0], c[1], b[0], b[1], p[0], p[1]) > 0


def incircle_sign(a: Sequence[float], b: Sequence[float],
                  c: Sequence[float], d: Sequence[float]) -> int:
    """+1 if d is strictly inside the circle through CCW a, b, c; -1 outside; 0 on it."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    errbound = _ERR_INCIRCLE * permanent
    if errbound > _TINY:
        if det > errbound:
            return 1
        if -det > errbound:
            return -1
    fa = [_fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])]
    ax, ay, bx, by, cx, cy, dx, dy = fa
    adx, ady, bdx, bdy, cdx, cdy = ax - dx, ay - dy, bx - dx, by - dy, cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return (det > 0) - (det < 0)


def _closest_exact(a, b, p):
    ax, ay, bx, by = _fraction(a[0]), _fraction(a[1]), _fraction(b[0]), _fraction(b[1])
    px, py = _fraction(p[0]), _fraction(p[1])
    vx, vy = bx - ax, by - ay
    vv = vx * vx + vy * vy
    if vv == 0:
        raise DegenerateEdgeError(f"degenerate segment at {tuple(a)!r}")
    t = ((px - ax) * vx + (py - ay) * vy) / vv
    if t <= 0:
        t = Fraction(0)
        cx, cy = ax, ay
    elif t >= 1:
        t = Fraction(1)
        cx, cy = bx, by
    else:
        cx, cy = ax + t * vx, ay + t * vy
    wx, wy = px - cx, py - cy
    return t, (cx, cy), (vx, vy), (wx, wy), vv


def closest_point_on_segment(a: Sequence[float], b: Sequence[float],
                             p: Sequence[float]) -> tuple[Point, float]:
    """Closest point of the closed segment [a, b] to p, and its squared distance."""
    _, (cx, cy), _, (wx, wy), _ = _closest_exact(a, b, p)
    return (float(cx), float(cy)), float(wx * wx + wy * wy)


@dataclass(frozen=True)
class CelestialDistance:
    """The pair (distance, wide angle) held in an exact, comparable form.

    ``d2`` is the squared Euclidean distance.  The wide angle alpha is not
    stored directly: ``cos2`` is the squared cosine of the acute angle
    between the segment's supporting line and the line from p to its
    closest point, which increases monotonically with alpha on [pi/2, pi].
    ``cos2`` is -1 when d2 is zero (alpha = 0).
    """

    d2: Fraction
    cos2: Fraction

    @classmethod
    def from_pair(cls, d2: float, alpha: float) -> "CelestialDistance":
        """Build from a real (d2, alpha) pair; the angle conversion is rounded."""
        if d2 == 0:
            return cls(Fraction(0), Fraction(-1))
        if not math.pi / 2 <= alpha <= math.pi:
            raise InvalidInputError(f"wide angle {alpha!r} outside [pi/2, pi]")
        c = math.cos(alpha)
        return cls(Fraction(d2), Fraction(0) if alpha == math.pi / 2 else Fraction(c * c))

    @property
    def distance(self) -> float:
        return math.sqrt(self.d2)

    @property
    def alpha(self) -> float:
        if self.d2 == 0:
            return 0.0
        return math.pi - math.acos(math.sqrt(min(1.0, float(self.cos2))))

    def key(self) -> tuple[Fraction, Fraction]:
        return self.d2, self.cos2

    def __lt__(self, other: "CelestialDistance") -> bool:
        return cd_less(self, other)


def celestial_distance(a: Sequence[float], b: Sequence[float],
                       p: Sequence[float]) -> CelestialDistance:
    _, _, (vx, vy), (wx, wy), vv = _closest_exact(a, b, p)
    ww = wx * wx + wy * wy
    if ww == 0:
        return CelestialDistance(Fraction(0), Fraction(-1))
    vw = vx * wx + vy * wy
    return CelestialDistance(ww, vw * vw / (vv * ww))


def cd_less(d: CelestialDistance, other: CelestialDistance) -> bool:
    """Lexicographic strict order on (distance, wide angle)."""
    return d.d2 < other.d2 or (d.d2 == other.d2 and d.cos2 < other.cos2)


def check_convex_polygon(pts: Sequence[Sequence[float]]) -> None:
    """Raise InvalidPolygonError unless pts is simple, strictly convex and CCW."""
    n = len(pts)
    if n < 3:
        raise InvalidPolygonError("polygon needs at least 3 vertices")
    turning = 0.0
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        if a[0] == b[0] and a[1] == b[1]:
            raise InvalidPolygonError(f"repeated vertex at index {i}")
        if orient_sign(a[0], a[1], b[0], b[1], c[0], c[1]) <= 0:
            raise InvalidPolygonError(f"corner {i} is not a strict left turn")
        turning += math.atan2(
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]),
            (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]),
        )
    if round(turning / (2 * math.pi)) != 1:
        raise InvalidPolygonError("polygon winds more than once")


def closest_edge_of_face(perimeter: Sequence[tuple[Sequence[float], Sequence[float]]],
                         p: Sequence[float], metric: Metric = Metric.CELESTIAL) -> set[int]:
    """Indices of the perimeter edges nearest to p under the chosen metric."""
    metric = Metric(metric)
    n = len(perimeter)
    for i, (a, b) in enumerate(perimeter):
        nb = perimeter[(i + 1) % n][0]
        if tuple(b) != tuple(nb):
            raise InvalidPolygonError(f"edge {i} does not end where edge {(i + 1) % n} starts")
    check_convex_polygon([a for a, _ in perimeter])
    dists = [celestial_distance(a, b, p) for a, b in perimeter]
    if metric is Metric.EUCLIDEAN:
        keys = [d.d2 for d in dists]
    else:
        keys = [d.key() for d in dists]
    best = min(keys)
    return {i for i, k in enumerate(keys) if k == best}
