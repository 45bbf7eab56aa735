import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from celestialwalk.bench import (
    CSV_HEADER,
    STRATEGIES,
    aggregate,
    csv_text,
    fit_exponent,
    obtuse_fraction,
    perimeter_lengths,
    run_batch,
    sample_queries,
    scaling_experiment,
    write_csv,
)
from celestialwalk.generators import chord_split_subdivision, delaunay_mesh, flipped_mesh, hex_grid
from celestialwalk.mesh import point_in_face
from celestialwalk.rng import SplitMix64

from shapes import triangle_grid


class TestObtuseFraction:
    def test_hex(self):
        assert obtuse_fraction(hex_grid(4, 5)) == 1.0

    def test_equilateral(self):
        assert obtuse_fraction(triangle_grid(5)) == 0.0

    @settings(max_examples=30)
    @given(st.integers(0, 2**64 - 1), st.integers(0, 120))
    def test_triangulations_at_most_one_third(self, seed, k):
        assert 3 * obtuse_fraction(flipped_mesh(50, k, seed)) <= 1


class TestSampling:
    def test_inner_box_and_interior_starts(self):
        m = chord_split_subdivision(10, 2, bbox=(0, 0, 10, 10))
        pairs = sample_queries(m, 300, SplitMix64(1))
        assert len(pairs) == 300
        for start, (x, y) in pairs:
            assert 1 <= x <= 9 and 1 <= y <= 9
            assert not m.is_outer(m.face[start])

    def test_filled_hex_queries_inside_domain(self):
        m = hex_grid(4, 4, fill_to_hull=True)
        for _, p in sample_queries(m, 200, SplitMix64(3)):
            assert m.contains_point(p)


class TestRunBatch:
    def test_celestial_never_aborts_on_delaunay(self):
        m = delaunay_mesh(1000, 1)
        rep = run_batch(m, ["celestial"], 1000, 9)
        assert rep.stats["celestial"].failures == 0
        assert rep.stats["celestial"].outside == 0

    def test_deterministic(self):
        m = delaunay_mesh(200, 4)
        a = run_batch(m, ["celestial", "visibility"], 100, 3, family="delaunay")
        b = run_batch(m, ["celestial", "visibility"], 100, 3, family="delaunay")
        assert a == b and a.rows() == b.rows()

    def test_located_faces_contain_query(self):
        m = delaunay_mesh(300, 6)
        rep = run_batch(m, ["celestial", "visibility"], 200, 2)
        for name in ("celestial", "visibility"):
            for (_, p), res in zip(rep.queries, rep.results[name]):
                assert res.is_located and point_in_face(m, res.face, p)

    def test_aggregates_recompute_from_traces(self):
        m = flipped_mesh(150, 300, 2)
        rep = run_batch(m, list(STRATEGIES), 60, 5, keep_traces=True)
        assert rep.recompute() == rep.stats

    def test_recompute_needs_traces(self):
        rep = run_batch(delaunay_mesh(50, 1), ["celestial"], 5, 1)
        with pytest.raises(ValueError):
            rep.recompute()

    def test_threads_match_serial(self):
        m = chord_split_subdivision(60, 3)
        a = run_batch(m, ["celestial", "straight"], 80, 4, keep_traces=True)
        b = run_batch(m, ["celestial", "straight"], 80, 4, keep_traces=True, threads=4)
        assert a == b

    def test_same_pairs_for_every_strategy(self):
        m = delaunay_mesh(100, 8)
        rep = run_batch(m, ["celestial", "straight"], 50, 1, keep_traces=True)
        starts = [s for s, _ in rep.queries]
        for name in ("celestial", "straight"):
            assert [t.start for t in rep.traces[name]] == starts

    def test_bad_inputs(self):
        m = delaunay_mesh(50, 1)
        with pytest.raises(ValueError):
            run_batch(m, ["celestial"], 0, 1)
        with pytest.raises(ValueError):
            run_batch(m, ["warp"], 3, 1)

    def test_pooled_ratio(self):
        m = delaunay_mesh(100, 2)
        rep = run_batch(m, ["celestial"], 40, 1, keep_traces=True)
        traces = rep.traces["celestial"]
        expected = sum(t.counters.orientation_tests for t in traces) / sum(len(t.steps) for t in traces)
        assert rep.stats["celestial"].mean_orient_per_he == expected


class TestCsv:
    def test_header_and_rows(self):
        rep = run_batch(delaunay_mesh(80, 1), ["celestial", "straight"], 20, 7, family="delaunay")
        text = csv_text(rep.rows())
        lines = text.splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert [l.split(",")[2] for l in lines[1:]] == ["celestial", "straight"]
        assert all(l.split(",")[0] == "delaunay" and l.endswith(",7") for l in lines[1:])

    def test_write_csv(self):
        buf = io.StringIO()
        write_csv([], buf)
        assert buf.getvalue() == ",".join(CSV_HEADER) + "\n"


class TestScaling:
    def test_fit_exact_power_law(self):
        slope, intercept = fit_exponent([10, 100, 1000], [3 * n**0.5 for n in (10, 100, 1000)])
        assert slope == pytest.approx(0.5) and intercept == pytest.approx(1.0986, abs=1e-4)

    def test_single_size_is_degenerate(self):
        with pytest.raises(ValueError):
            scaling_experiment("delaunay-uniform", [100], 10, 1)
        with pytest.raises(ValueError):
            fit_exponent([100, 1000], [1, 2])

    def test_rejects_unsorted_and_unknown(self):
        with pytest.raises(ValueError):
            scaling_experiment("delaunay-uniform", [1000, 100, 10], 10, 1)
        with pytest.raises(ValueError):
            scaling_experiment("hex", [10, 100, 1000], 10, 1)

    def test_deterministic_table(self):
        a = scaling_experiment("delaunay-uniform", [20, 60, 200], 30, 4)
        b = scaling_experiment("delaunay-uniform", [20, 60, 200], 30, 4)
        assert a == b
        assert [n for n, _, _ in a.table] == [20, 60, 200]
        assert a.table[0][1] < a.table[-1][1]


def test_perimeter_lengths_sum_to_halfedges():
    m = chord_split_subdivision(12, 1)
    assert sum(perimeter_lengths(m)) == m.n_halfedges


def test_aggregate_counts_outcomes():
    from celestialwalk.walks import celestial_walk
    m = delaunay_mesh(50, 1)
    outcomes = [celestial_walk(m, 0, p) for p in [(0.5, 0.5), (3.0, 3.0)]]
    s = aggregate("celestial", outcomes)
    assert (s.queries, s.failures, s.outside) == (2, 0, 1)
