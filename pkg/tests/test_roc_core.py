import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_hull
from pvoros import DataError, DatasetProfile, RocCurve, build_roc_curve, cost, iso_line, upper_hull
from pvoros.roc_core import cost_ratio_from_t, costs, slope_to_t, t_from_cost_ratio


def pts(curve):
    return [(float(x), float(y)) for x, y in zip(curve.fpr, curve.tpr)]


class TestBuildRocCurve:
    def test_four_thresholds(self):
        c = build_roc_curve([0.9, 0.8, 0.3, 0.1], [1, 1, 0, 0])
        assert pts(c) == [(0, 0), (0, 0.5), (0, 1), (0.5, 1), (1, 1)]
        assert c.thresholds[0] == math.inf
        assert list(c.thresholds[1:]) == [0.9, 0.8, 0.3, 0.1]

    def test_tied_scores_make_one_step(self):
        c = build_roc_curve([0.4, 0.4], [1, 0])
        assert pts(c) == [(0, 0), (1, 1)]

    def test_anti_learner(self):
        c = build_roc_curve([0.2, 0.9], [1, 0])
        assert set(pts(c)) == {(0, 0), (1, 0), (1, 1)}

    @pytest.mark.parametrize(
        "labels, msg",
        [([1, 1], "class 0 missing"), ([0, 0], "class 1 missing"), ([0, 2], "0 or 1, found 2")],
    )
    def test_label_errors(self, labels, msg):
        with pytest.raises(DataError, match=msg):
            build_roc_curve([0.1, 0.2], labels)

    def test_empty(self):
        with pytest.raises(DataError):
            build_roc_curve([], [])

    def test_arrays_read_only(self):
        c = build_roc_curve([0.9, 0.1], [1, 0])
        with pytest.raises(ValueError):
            c.fpr[0] = 0.5

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.tuples(st.integers(0, 6), st.integers(0, 1)), min_size=2, max_size=40).filter(
            lambda r: len({lab for _, lab in r}) == 2
        )
    )
    def test_matches_threshold_enumeration(self, rows):
        scores = np.array([s for s, _ in rows], dtype=float)
        labels = np.array([lab for _, lab in rows])
        c = build_roc_curve(scores, labels)
        P, N = labels.sum(), (1 - labels).sum()
        expect = [(0.0, 0.0)]
        for tau in sorted(set(scores), reverse=True):
            pred = scores >= tau
            expect.append(((pred & (labels == 0)).sum() / N, (pred & (labels == 1)).sum() / P))
        assert np.allclose(np.array(pts(c)), np.array(expect), atol=0, rtol=0)
        assert np.all(np.diff(c.fpr) >= 0) and np.all(np.diff(c.tpr) >= 0)


class TestUpperHull:
    def test_example(self):
        c = RocCurve.from_points([(0.1, 0.6), (0.2, 0.5), (0.4, 0.9)])
        assert pts(upper_hull(c)) == [(0, 0), (0.1, 0.6), (0.4, 0.9), (1, 1)]

    def test_collinear_removed(self):
        c = RocCurve.from_points([(0, 0), (0.5, 0.5), (1, 1)])
        assert pts(upper_hull(c)) == [(0, 0), (1, 1)]

    def test_already_concave(self):
        c = RocCurve.from_points([(0, 0), (0, 1), (1, 1)])
        assert pts(upper_hull(c)) == [(0, 0), (0, 1), (1, 1)]

    def test_thresholds_follow_vertices(self):
        c = build_roc_curve([0.9, 0.8, 0.3, 0.1], [1, 1, 0, 0])
        h = upper_hull(c)
        assert pts(h) == [(0, 0), (0, 1), (1, 1)]
        assert list(h.thresholds) == [math.inf, 0.8, 0.1]

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 10), st.integers(0, 10)), min_size=1, max_size=8))
    def test_matches_brute_force(self, raw):
        points = [(a / 10, b / 10) for a, b in raw]
        c = RocCurve.from_points(points)
        assert pts(upper_hull(c)) == pytest.approx(brute_force_hull(points))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=1, max_size=30))
    def test_hull_is_concave_and_above_points(self, raw):
        points = [(a / 1000, b / 1000) for a, b in raw]
        h = upper_hull(RocCurve.from_points(points))
        hull = list(zip(h.fpr, h.tpr))
        assert np.all(np.diff(h.fpr) >= 0) and np.all(np.diff(h.tpr) >= 0)
        for (ax, ay), (bx, by), (cx, cy) in zip(hull, hull[1:], hull[2:]):
            assert (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) < 0  # strict right turn
        for px, py in points:
            for (ax, ay), (bx, by) in zip(hull, hull[1:]):
                if ax <= px <= bx:
                    assert (bx - ax) * (py - ay) - (by - ay) * (px - ax) <= 1e-12


class TestCost:
    @pytest.mark.parametrize("t", [0.0, 0.3, 1.0])
    def test_corner_points(self, t):
        assert cost((1, 0), t) == 1.0
        assert cost((0, 1), t) == 0.0

    def test_example(self):
        assert cost((0.085, 0.135), 0.5) == pytest.approx(0.475, abs=1e-15)

    def test_t_outside_unit_interval(self):
        with pytest.raises(ValueError):
            cost((0.1, 0.2), 1.5)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_in_unit_interval(self, h, k, t):
        assert 0 <= costs(h, k, t) <= 1


class TestCostRatio:
    def test_scenario_endpoints(self):
        prof = DatasetProfile(1000, 9000)
        assert t_from_cost_ratio(1 / 9, prof) == 0.5
        assert t_from_cost_ratio(1 / 6, prof) == pytest.approx(0.6, abs=1e-15)

    def test_symmetric(self):
        assert t_from_cost_ratio(1, DatasetProfile(50, 50)) == 0.5

    def test_round_trip(self):
        prof = DatasetProfile(104, 896)
        for t in (0.1, 0.5, 0.9):
            assert t_from_cost_ratio(cost_ratio_from_t(t, prof), prof) == pytest.approx(t, abs=1e-14)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf])
    def test_bad_ratio(self, bad):
        with pytest.raises(ValueError):
            t_from_cost_ratio(bad, DatasetProfile(1, 2))


class TestIsoLine:
    def test_slope_one(self):
        line = iso_line((0.1, 0.6), 0.5)
        assert line.slope == pytest.approx(1.0)
        assert line.y_at(0.0) == pytest.approx(0.5)

    def test_horizontal_at_t0(self):
        line = iso_line((0.3, 0.4), 0.0)
        assert line.slope == 0
        assert line.y_at(0.9) == pytest.approx(0.4)

    def test_vertical_at_t1(self):
        line = iso_line((0.3, 0.4), 1.0)
        assert line.slope == math.inf
        assert line.x_at(0.0) == pytest.approx(0.3)
        with pytest.raises(ValueError):
            line.y_at(0.1)

    def test_residual_sign_marks_higher_cost(self):
        line = iso_line((0.2, 0.5), 0.4)
        assert line.value(0.3, 0.5) > 0  # more false positives: costlier
        assert line.value(0.2, 0.7) < 0
        assert cost((0.3, 0.5), 0.4) > cost((0.2, 0.5), 0.4)

    def test_slope_to_t(self):
        assert slope_to_t(0.3, 0.3) == 0.5
        assert slope_to_t(0.1, 0.6) == pytest.approx(6 / 7)
