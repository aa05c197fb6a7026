import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_region_params
from oracles import polygon_area, square_region
from pvoros import (
    AssumptionError,
    Constraints,
    DatasetProfile,
    DegenerateRegionError,
    RegionCase,
    classify_region,
    is_feasible,
    region_polygon,
)
from pvoros.feasible_region import (
    capacity_line,
    check_practical,
    never_alarm_t_bound,
    practical_violations,
    precision_slope,
    region_area_closed_form,
    unconstrained_region,
)

FIG2 = DatasetProfile(1000, 9000)


def close_vertices(actual, expected, tol=1e-12):
    assert len(actual) == len(expected)
    for (x, y), (ex, ey) in zip(actual, expected):
        assert abs(x - ex) <= tol and abs(y - ey) <= tol


class TestLines:
    def test_precision_slope(self):
        assert precision_slope(FIG2, 0.15) == pytest.approx(27 / 17, abs=1e-14)

    def test_precision_slope_at_prevalence_is_diagonal(self):
        assert precision_slope(FIG2, 0.1) == pytest.approx(1.0)
        assert precision_slope(DatasetProfile(40, 40), 0.5) == 1.0

    def test_capacity_line(self):
        line = capacity_line(FIG2, 900)
        assert line.y_at(0.0) == pytest.approx(0.9)
        assert line.slope == -9

    def test_capacity_at_dataset_size_passes_top_corner(self):
        line = capacity_line(FIG2, 10000)
        assert line.value(1, 1) == 0

    def test_never_alarm_bound(self):
        assert never_alarm_t_bound(FIG2, 0.15) == pytest.approx(1350 / 2200, abs=1e-15)


class TestIsFeasible:
    def test_example(self):
        assert is_feasible((0.05, 0.5), FIG2, Constraints(0.15, 3000))

    @pytest.mark.parametrize("kappa", [900, 3000, 9100])
    def test_origin_always(self, kappa):
        assert is_feasible((0, 0), FIG2, Constraints(0.15, kappa))

    def test_always_alarm_excluded(self):
        assert not is_feasible((1, 1), FIG2, Constraints(0.15, 9999))

    def test_precision_violation(self):
        assert not is_feasible((0.1, 0.1), FIG2, Constraints(0.15, 9999))


class TestClassify:
    @pytest.mark.parametrize(
        "kappa, case",
        [
            (900, RegionCase.CASE1_TRIANGLE),
            (3000, RegionCase.CASE2_QUADRILATERAL),
            (9100, RegionCase.CASE3_TRIANGLE),
        ],
    )
    def test_fig2(self, kappa, case):
        assert classify_region(FIG2, Constraints(0.15, kappa)) is case

    def test_alpha_below_prevalence(self):
        assert classify_region(FIG2, Constraints(0.05, 9800)) is RegionCase.CASE3A_PENTAGON
        assert classify_region(FIG2, Constraints(0.05, 900)) is RegionCase.CASE1_TRIANGLE

    def test_degenerate(self):
        assert classify_region(FIG2, Constraints(0.15, 0)) is RegionCase.POINT
        assert classify_region(FIG2, Constraints(1.0, 500)) is RegionCase.SEGMENT
        assert classify_region(FIG2, Constraints(0.0, 500)) is RegionCase.CAPACITY_ONLY
        assert classify_region(FIG2, Constraints(0.15, 10000)) is RegionCase.PRECISION_ONLY

    def test_zero_area_raises(self):
        with pytest.raises(DegenerateRegionError):
            region_polygon(FIG2, Constraints(0.15, 0))
        with pytest.raises(DegenerateRegionError):
            region_polygon(FIG2, Constraints(1.0, 500))


class TestPolygon:
    def test_case1(self):
        r = region_polygon(FIG2, Constraints(0.15, 900))
        close_vertices(r.vertices, [(0, 0), (0.085, 0.135), (0, 0.9)])
        assert r.area == pytest.approx(0.03825, abs=1e-12)

    def test_case2(self):
        r = region_polygon(FIG2, Constraints(0.15, 3000))
        close_vertices(r.vertices, [(0, 0), (0.85 / 3, 0.45), (2 / 9, 1), (0, 1)])
        assert r.area == pytest.approx(3.65e6 / 1.8e7, abs=1e-12)

    def test_case3(self):
        r = region_polygon(FIG2, Constraints(0.15, 9100))
        close_vertices(r.vertices, [(0, 0), (85 / 135, 1), (0, 1)])
        assert r.area == pytest.approx(85 / 270, abs=1e-12)
        assert r.area == pytest.approx(0.314815, abs=1e-6)

    @pytest.mark.parametrize("kappa", [900, 3000, 9100])
    def test_closed_form_area(self, kappa):
        con = Constraints(0.15, kappa)
        assert region_area_closed_form(FIG2, con) == pytest.approx(region_polygon(FIG2, con).area, abs=1e-12)

    def test_unconstrained_is_unit_square(self):
        r = unconstrained_region()
        assert r.area == 1.0

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_half_plane_clipping(self, seed):
        prof, con = random_region_params(np.random.default_rng(seed))
        r = region_polygon(prof, con)
        ref = square_region(prof.n_pos, prof.n_neg, con.alpha, con.kappa)
        assert r.area == pytest.approx(polygon_area(ref), abs=1e-12)
        for x, y in r.vertices:
            assert r.contains(x, y)
        if r.is_main_case():
            assert region_area_closed_form(prof, con) == pytest.approx(r.area, abs=1e-12)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_area_monotone_in_bounds(self, seed):
        rng = np.random.default_rng(seed)
        prof, con = random_region_params(rng)
        a = region_polygon(prof, con).area
        looser_kappa = min(con.kappa * 1.1, prof.n_total * 0.9999)
        assert region_polygon(prof, Constraints(con.alpha, max(looser_kappa, con.kappa))).area >= a - 1e-15
        tighter_alpha = con.alpha + (1 - con.alpha) * 0.1
        assert region_polygon(prof, Constraints(tighter_alpha, con.kappa)).area <= a + 1e-15

    @pytest.mark.parametrize("eps", [1e-9, 0.0, -1e-9])
    def test_case_boundary_continuity(self, eps):
        # Case2 -> Case3 switch at alpha*kappa = |P|
        kappa = 1000 / 0.15 + eps * 1e4
        r = region_polygon(FIG2, Constraints(0.15, kappa))
        assert r.area == pytest.approx((1 - 0.15) * 1000 / (2 * 0.15 * 9000), abs=1e-9)
        # Case1 -> Case2 switch at kappa = |P|
        r = region_polygon(FIG2, Constraints(0.15, 1000 + eps * 1e4))
        assert r.area == pytest.approx(0.85 * 1000**2 / (2 * 9000 * 1000), abs=1e-9)


class TestPracticalAssumptions:
    def test_all_hold(self):
        assert practical_violations(FIG2, Constraints(0.15, 900), t_max=0.6) == []

    def test_t_above_bound_names_the_bound(self):
        with pytest.raises(AssumptionError, match="0.6136363636"):
            check_practical(FIG2, Constraints(0.15, 900), t_max=0.62)

    def test_each_assumption(self):
        assert practical_violations(DatasetProfile(10, 10), Constraints(0.6, 5))
        assert practical_violations(FIG2, Constraints(0.05, 900))
        assert practical_violations(FIG2, Constraints(0.15, 10000))
        assert len(practical_violations(FIG2, Constraints(0.05, 10000), t_max=0.99)) == 3

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            Constraints(1.5, 10)
        with pytest.raises(ValueError):
            Constraints(0.5, -1)
        with pytest.raises(ValueError):
            Constraints(0.5, math.nan)
