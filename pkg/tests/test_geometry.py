import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from celestialwalk.geometry import (
    CelestialDistance,
    DegenerateEdgeError,
    InvalidInputError,
    InvalidPolygonError,
    Metric,
    Orientation,
    cd_less,
    celestial_distance,
    closest_edge_of_face,
    closest_point_on_segment,
    incircle_sign,
    left_of_approx_bisector,
    obtuse,
    orient,
    strictly_right,
)

from oracles import (
    frac_bisector_left,
    frac_obtuse,
    frac_orient,
    near_collinear_triple,
    random_convex_polygon,
    trig_wide_angle,
)

coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)
small_int = st.integers(-50, 50)
int_point = st.tuples(small_int, small_int)

SQUARE = [((0, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1)), ((0, 1), (0, 0))]
BOTTOM, RIGHT, TOP, LEFT = range(4)


class TestOrient:
    def test_left(self):
        assert orient((0, 0), (2, 0), (1, 1)) is Orientation.LEFT

    def test_right(self):
        assert orient((0, 0), (2, 0), (1, -3)) is Orientation.RIGHT

    def test_collinear(self):
        assert orient((0, 0), (1, 1), (2, 2)) is Orientation.COLLINEAR

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_non_finite(self, bad):
        with pytest.raises(InvalidInputError):
            orient((0, 0), (1, 0), (bad, 1))

    def test_float_rounding_trap(self):
        # the naive float determinant of this triple is zero
        a, b, c = (0.5, 0.5), (12.0, 12.0), (24.0, 24.0 + 2**-48)
        assert orient(a, b, c) is Orientation(frac_orient(a, b, c))
        assert orient(a, b, c) is Orientation.LEFT

    @given(point, point, point)
    def test_swap_antisymmetry(self, a, b, c):
        assert orient(a, b, c) == -orient(b, a, c)

    @given(point, point, point)
    def test_matches_rational_oracle(self, a, b, c):
        assert orient(a, b, c) == frac_orient(a, b, c)

    @given(st.integers(0, 2**32), st.integers(-4, 4))
    def test_near_degenerate_matches_oracle(self, seed, ulps):
        a, b, c = near_collinear_triple(random.Random(seed), ulps)
        assert orient(a, b, c) == frac_orient(a, b, c)


class TestStrictlyRight:
    @pytest.mark.parametrize("p, expected", [
        ((0.5, -0.1), True),
        ((0.5, 0.0), False),
        ((0.5, 0.1), False),
    ])
    def test_examples(self, p, expected):
        assert strictly_right((0, 0), (1, 0), p) is expected

    def test_degenerate_edge(self):
        with pytest.raises(DegenerateEdgeError):
            strictly_right((1, 1), (1, 1), (0, 0))


class TestClosestPoint:
    def test_interior_projection(self):
        assert closest_point_on_segment((0, 0), (4, 0), (1, 5)) == ((1.0, 0.0), 25.0)

    def test_clamped_to_endpoint(self):
        # frozen from a dense-sampling minimisation over the segment
        assert closest_point_on_segment((0, 0), (4, 0), (6, 2)) == ((4.0, 0.0), 8.0)

    def test_on_segment(self):
        assert closest_point_on_segment((0, 0), (4, 0), (2, 0)) == ((2.0, 0.0), 0.0)

    def test_degenerate(self):
        with pytest.raises(DegenerateEdgeError):
            closest_point_on_segment((2, 2), (2, 2), (0, 0))

    @given(int_point, int_point, int_point)
    def test_no_sampled_point_is_closer(self, a, b, p):
        assume(a != b)
        _, d2 = closest_point_on_segment(a, b, p)
        for i in range(101):
            t = i / 100
            x, y = a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])
            assert d2 <= (x - p[0]) ** 2 + (y - p[1]) ** 2 + 1e-9


class TestCelestialDistance:
    def test_perpendicular_drop(self):
        d = celestial_distance((0, 0), (4, 0), (2, 3))
        assert d.d2 == 9
        assert d.alpha == pytest.approx(math.pi / 2)

    def test_beyond_endpoint(self):
        d = celestial_distance((0, 0), (4, 0), (6, 2))
        assert d.d2 == 8
        assert d.alpha == pytest.approx(trig_wide_angle((0, 0), (4, 0), (6, 2)))
        assert d.alpha == pytest.approx(3 * math.pi / 4)

    def test_on_segment_is_zero(self):
        d = celestial_distance((0, 0), (4, 0), (2, 0))
        assert d.d2 == 0 and d.alpha == 0

    def test_on_supporting_line_beyond_end(self):
        d = celestial_distance((0, 0), (4, 0), (7, 0))
        assert d.d2 == 9
        assert d.alpha == pytest.approx(math.pi)

    def test_from_pair_agrees_with_geometry(self):
        d = celestial_distance((0, 0), (4, 0), (6, 2))
        assert cd_less(CelestialDistance.from_pair(8, math.pi / 2), d)
        assert cd_less(d, CelestialDistance.from_pair(8, math.pi))

    def test_from_pair_rejects_narrow_angle(self):
        with pytest.raises(InvalidInputError):
            CelestialDistance.from_pair(1.0, 0.3)

    @given(point, point, point)
    def test_direction_independent(self, a, b, p):
        assume(a != b)
        assert celestial_distance(a, b, p) == celestial_distance(b, a, p)

    @given(int_point, int_point, int_point)
    def test_alpha_matches_trig_oracle(self, a, b, p):
        assume(a != b)
        d = celestial_distance(a, b, p)
        if d.d2 == 0:
            assert d.alpha == 0
        else:
            assert math.pi / 2 - 1e-12 <= d.alpha <= math.pi + 1e-12
            assert d.alpha == pytest.approx(trig_wide_angle(a, b, p), abs=1e-7)


class TestCdLess:
    def test_smaller_distance_wins(self):
        assert cd_less(CelestialDistance.from_pair(4, math.pi / 2),
                       CelestialDistance.from_pair(9, 3 * math.pi / 4))

    def test_tie_on_distance_smaller_angle_wins(self):
        assert cd_less(CelestialDistance.from_pair(9, math.pi / 2),
                       CelestialDistance.from_pair(9, 3 * math.pi / 4))

    def test_irreflexive(self):
        d = CelestialDistance.from_pair(9, 3 * math.pi / 4)
        assert not cd_less(d, d)

    @given(point, point, point, point, point, point)
    def test_trichotomy(self, a, b, p, c, d, q):
        assume(a != b and c != d)
        x, y = celestial_distance(a, b, p), celestial_distance(c, d, q)
        assert [cd_less(x, y), cd_less(y, x), x == y].count(True) == 1

    @given(int_point, int_point, int_point)
    def test_angle_order_matches_trig_on_distance_ties(self, u, v, p):
        # two edges leaving the origin, p in both corner cones: equal distances
        a = (0, 0)
        assume(u != a and v != a and p != a)

        def away(w):
            return w if w[0] * p[0] + w[1] * p[1] <= 0 else (-w[0], -w[1])

        b, c = away(u), away(v)
        d1, d2 = celestial_distance(a, b, p), celestial_distance(a, c, p)
        assert d1.d2 == d2.d2 > 0
        t1, t2 = trig_wide_angle(a, b, p), trig_wide_angle(a, c, p)
        assume(abs(t1 - t2) > 1e-9)
        assert cd_less(d1, d2) == (t1 < t2)


class TestObtuse:
    def test_obtuse(self):
        assert obtuse((0, 0), (2, 0), (3, 1))

    def test_right_angle_is_not_obtuse(self):
        assert not obtuse((0, 0), (2, 0), (2, 2))

    def test_acute(self):
        assert not obtuse((0, 0), (2, 0), (1, 2))

    def test_degenerate(self):
        with pytest.raises(DegenerateEdgeError):
            obtuse((0, 0), (0, 0), (1, 1))

    @given(int_point, int_point, int_point)
    def test_matches_interior_angle(self, a, b, c):
        assume(a != b and b != c)
        ux, uy = a[0] - b[0], a[1] - b[1]
        vx, vy = c[0] - b[0], c[1] - b[1]
        angle = abs(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy))
        if abs(angle - math.pi / 2) < 1e-12:
            assert not obtuse(a, b, c)
        else:
            assert obtuse(a, b, c) == (angle > math.pi / 2)

    @given(point, point, point)
    def test_matches_rational_oracle(self, a, b, c):
        assume(a != b and b != c)
        assert obtuse(a, b, c) == frac_obtuse(a, b, c)


class TestApproxBisector:
    A, B, C = (0, 0), (2, 0), (3, 1)

    def test_left(self):
        assert left_of_approx_bisector(self.A, self.B, self.C, (4, 0))
        # the same point is Euclidean-closer to b-c than to a-b
        assert celestial_distance(self.B, self.C, (4, 0)).d2 < celestial_distance(self.A, self.B, (4, 0)).d2

    def test_on_line_is_false(self):
        assert not left_of_approx_bisector(self.A, self.B, self.C, (2, 0))
        assert not left_of_approx_bisector(self.A, self.B, self.C, (3, -3))

    def test_right(self):
        assert not left_of_approx_bisector(self.A, self.B, self.C, (1, -5))

    def test_coincident_neighbours(self):
        with pytest.raises(DegenerateEdgeError):
            left_of_approx_bisector((0, 0), (1, 1), (0, 0), (2, 2))

    @given(point, point, point, point)
    def test_matches_rational_oracle(self, a, b, c, p):
        assume(a != c)
        assert left_of_approx_bisector(a, b, c, p) == frac_bisector_left(a, b, c, p)


class TestIncircle:
    def test_inside_and_outside(self):
        a, b, c = (0, 0), (1, 0), (0, 1)
        assert incircle_sign(a, b, c, (0.5, 0.5)) > 0
        assert incircle_sign(a, b, c, (2, 2)) < 0
        assert incircle_sign(a, b, c, (1, 1)) == 0


class TestClosestEdgeOfFace:
    @pytest.mark.parametrize("metric", list(Metric))
    def test_orthogonal_slab(self, metric):
        assert closest_edge_of_face(SQUARE, (0.5, -1), metric) == {BOTTOM}

    @pytest.mark.parametrize("metric", list(Metric))
    def test_diagonal_tie_persists(self, metric):
        assert closest_edge_of_face(SQUARE, (-1, -1), metric) == {BOTTOM, LEFT}

    def test_corner_cone_split(self):
        p = (-1, -0.5)
        assert closest_edge_of_face(SQUARE, p, Metric.EUCLIDEAN) == {BOTTOM, LEFT}
        assert closest_edge_of_face(SQUARE, p, Metric.CELESTIAL) == {LEFT}
        # explicit values: both distances are 1.25; left edge is the wider line
        left, bottom = celestial_distance((0, 1), (0, 0), p), celestial_distance((0, 0), (1, 0), p)
        assert left.d2 == bottom.d2 == Fraction(5, 4)
        assert left.alpha < bottom.alpha

    def test_clockwise_rejected(self):
        cw = [(b, a) for a, b in reversed(SQUARE)]
        with pytest.raises(InvalidPolygonError):
            closest_edge_of_face(cw, (2, 2))

    def test_collinear_rejected(self):
        poly = [((0, 0), (1, 0)), ((1, 0), (2, 0)), ((2, 0), (1, 1)), ((1, 1), (0, 0))]
        with pytest.raises(InvalidPolygonError):
            closest_edge_of_face(poly, (5, 5))

    @settings(max_examples=200)
    @given(st.integers(0, 2**32))
    def test_celestial_refines_euclidean(self, seed):
        rng = random.Random(seed)
        poly = random_convex_polygon(rng)
        edges = list(zip(poly, poly[1:] + poly[:1]))
        p = (rng.uniform(-3, 3), rng.uniform(-3, 3))
        euc = closest_edge_of_face(edges, p, Metric.EUCLIDEAN)
        cel = closest_edge_of_face(edges, p, Metric.CELESTIAL)
        assert cel and cel <= euc
        if len(euc) == 1:
            assert cel == euc
