import numpy as np
import pytest

from pvoros import (
    CandidateSet,
    Constraints,
    CostSpec,
    DatasetProfile,
    RocCurve,
    Strategy,
    constant_policy,
    expected_test_cost,
    region_polygon,
    select_model,
    win_heatmap,
)
from pvoros.selection import (
    ALL_STRATEGIES,
    INVALID,
    NO_FEASIBLE_CANDIDATE,
    NO_THRESHOLDS,
    TIE,
    Candidate,
    feasible_pauroc,
    feasible_recall,
    strategy_metric,
    strategy_policy,
    thread_count,
)

FIG2 = DatasetProfile(1000, 9000)
SPEC = CostSpec.uniform_t(0.5, 0.6, resolution=257)


def test_scores(fpr, tpr, n=20):
    """Scores and labels whose threshold 0.5 lands exactly on (fpr, tpr)."""
    n_hi_pos, n_hi_neg = round(tpr * n), round(fpr * n)
    pos = np.r_[np.full(n_hi_pos, 0.9), np.full(n - n_hi_pos, 0.1)]
    neg = np.r_[np.full(n_hi_neg, 0.9), np.full(n - n_hi_neg, 0.1)]
    return np.r_[pos, neg], np.r_[np.ones(n, int), np.zeros(n, int)]


test_scores.__test__ = False


def curve(points, name):
    thr = np.linspace(0.9, 0.1, len(points))
    return RocCurve.from_points(points, thresholds=thr, name=name)


class TestMetrics:
    def test_feasible_recall(self, case2):
        c = RocCurve.from_points([(0.05, 0.5), (0.4, 0.95)])
        assert feasible_recall(c, case2) == 0.5

    def test_feasible_recall_none(self, case2):
        assert feasible_recall(RocCurve.from_points([(0.5, 0.5)]), case2) == 0.0

    def test_feasible_recall_perfect(self, case2):
        assert feasible_recall(RocCurve.from_points([(0, 1)]), case2) == 1.0

    def test_pauroc(self, case2):
        assert feasible_pauroc(RocCurve.from_points([(0.1, 0.6)]), case2) == pytest.approx(0.03)

    def test_pauroc_origin_only(self, case2):
        assert feasible_pauroc(RocCurve.from_points([(0.5, 0.5)]), case2) == 0.0

    def test_pauroc_all_feasible_is_auroc(self):
        region = region_polygon(FIG2, Constraints(0.0, FIG2.n_total))
        c = RocCurve.from_points([(0.1, 0.6), (0.4, 0.9)])
        assert feasible_pauroc(c, region) == pytest.approx(c.auc())


class TestExpectedTestCost:
    def test_constant_policy(self):
        s, y = test_scores(0.1, 0.6)
        pol = constant_policy((0.1, 0.6), 0.5, SPEC)
        assert expected_test_cost(pol, s, y, SPEC) == pytest.approx(0.235, abs=1e-12)

    def test_perfect(self):
        s, y = test_scores(0.0, 1.0)
        assert expected_test_cost(constant_policy((0, 1), 0.5, SPEC), s, y, SPEC) == 0.0

    def test_recall_falls_back_to_never_alarm(self, case2):
        pol = strategy_policy(Strategy.MAX_FEASIBLE_RECALL, curve([(0.5, 0.5)], "x"), case2, SPEC)
        assert pol.threshold_at(0.55)[0] == np.inf

    def test_never_alarm(self):
        s, y = test_scores(0.1, 0.6)
        pol = constant_policy((0, 0), np.inf, SPEC)
        assert expected_test_cost(pol, s, y, SPEC) == pytest.approx(1 - 0.55, abs=1e-12)

    def test_monte_carlo_stderr(self):
        s, y = test_scores(0.1, 0.6)
        spec = CostSpec.cost_ratio(1 / 9, 1 / 6, FIG2, samples=5000, seed=2)
        pol = constant_policy((0.1, 0.6), 0.5, spec)
        mean, se = expected_test_cost(pol, s, y, spec, return_stderr=True)
        assert 0 < se < 1e-3
        t, _ = spec.nodes()
        assert mean == pytest.approx(np.mean(0.1 * t + 0.4 * (1 - t)))

    def test_quadrature_stderr_is_zero(self):
        s, y = test_scores(0.1, 0.6)
        assert expected_test_cost(constant_policy((0.1, 0.6), 0.5, SPEC), s, y, SPEC, return_stderr=True)[1] == 0

    def test_empty_policy(self, case2):
        pol = strategy_policy(Strategy.MAX_PV, curve([(0.5, 0.5)], "x"), case2, SPEC)
        assert pol.is_empty
        s, y = test_scores(0.1, 0.6)
        with pytest.raises(ValueError, match="empty"):
            expected_test_cost(pol, s, y, SPEC)


class TestSelectModel:
    def test_dominant_wins_everywhere(self, case2):
        strong = curve([(0.05, 0.4), (0.1, 0.6), (0.3, 0.85)], "strong")
        weak = curve([(0.05, 0.3), (0.1, 0.5), (0.3, 0.8)], "weak")
        cands = CandidateSet.from_curves({"weak": weak, "strong": strong})
        for strategy in ALL_STRATEGIES:
            assert select_model(cands, strategy, case2, SPEC).winner == "strong"

    def test_single_candidate(self, case2):
        cands = CandidateSet.from_curves({"only": curve([(0.1, 0.6)], "only")})
        for strategy in ALL_STRATEGIES:
            assert select_model(cands, strategy, case2, SPEC).winner == "only"

    def test_pv_and_voros_disagree_on_crossing_curves(self, case2):
        # "late" is excellent at high fpr, which the capacity bound forbids
        early = curve([(0.02, 0.45), (0.05, 0.6), (0.5, 0.75)], "early")
        late = curve([(0.05, 0.35), (0.2, 0.6), (0.3, 0.97)], "late")
        cands = CandidateSet.from_curves({"early": early, "late": late})
        assert select_model(cands, Strategy.MAX_PV, case2, SPEC).winner == "early"
        assert select_model(cands, Strategy.MAX_VOROS, case2, SPEC).winner == "late"

    def test_ties_break_by_name(self, case2):
        c = [(0.05, 0.5)]
        cands = CandidateSet.from_curves({"b": curve(c, "b"), "a": curve(c, "a")})
        assert select_model(cands, Strategy.MAX_PV, case2, SPEC).winner == "a"

    def test_flags(self, case2):
        cands = CandidateSet.from_curves({"x": RocCurve.from_points([(0.5, 0.5)])})
        rep = select_model(cands, Strategy.MAX_PV, case2, SPEC)
        assert NO_FEASIBLE_CANDIDATE in rep.flags and NO_THRESHOLDS in rep.flags
        assert rep.policy is None and rep.test_cost is None

    def test_test_cost_reported(self, case2):
        s, y = test_scores(0.1, 0.6)
        cands = CandidateSet.from_scores({"m": (s, y)}, test={"m": (s, y)})
        rep = select_model(cands, Strategy.MAX_PV, case2, SPEC)
        assert rep.test_cost == pytest.approx(0.235, abs=1e-12)
        d = rep.to_dict()
        assert d["strategy"] == "MaxPV" and d["mc_seed"] is None

    def test_metric_values(self, case2):
        c = curve([(0.1, 0.6)], "c")
        assert strategy_metric("MaxFeasibleRecall", c, case2, SPEC) == 0.6
        assert strategy_metric("MaxFeasiblePAUROC", c, case2, SPEC) == pytest.approx(0.03)


class TestCandidateSet:
    def test_duplicate(self):
        cs = CandidateSet.from_curves({"a": RocCurve.from_points([(0.1, 0.5)])})
        with pytest.raises(ValueError):
            cs.add(Candidate("a", RocCurve.from_points([(0.2, 0.5)])))

    def test_test_names_must_match(self):
        s, y = test_scores(0.1, 0.6)
        with pytest.raises(ValueError):
            CandidateSet.from_scores({"a": (s, y)}, test={"b": (s, y)})


class TestHeatmap:
    ALPHAS = np.linspace(0.12, 0.58, 4)
    KAPPAS = np.geomspace(0.006, 0.69, 5)

    def grid(self, curves, **kw):
        return win_heatmap(curves, self.ALPHAS, self.KAPPAS, CostSpec.uniform_t(0.35, 0.5, 65), FIG2, **kw)

    def test_identical_curves_tie(self):
        c = curve([(0.02, 0.3), (0.1, 0.6)], "x")
        g = self.grid({"a": c, "b": c})
        valid = [w for row in g.winners for w in row if w != INVALID]
        assert valid and all(w == TIE for w in valid)

    def test_dominant_wins(self):
        # same tpr at lower fpr: each feasible weak point has a feasible strong one above-left of it
        weak = curve([(0.01, 0.1), (0.05, 0.3), (0.2, 0.6)], "weak")
        strong = curve([(0.002, 0.1), (0.02, 0.3), (0.1, 0.6)], "strong")
        g = self.grid({"strong": strong, "weak": weak}, epsilon=0.0)
        assert g.winner_set() == {"strong"}
        # equal values (both curves reach the top of a tiny region) count as ties
        assert all(w in ("strong", TIE, INVALID) for row in g.winners for w in row)
        assert g.count("strong") > g.count(TIE)

    def test_invalid_cells(self):
        c = curve([(0.02, 0.3), (0.1, 0.6)], "x")
        g = win_heatmap({"a": c, "b": c}, [0.05, 0.3], [0.1], SPEC, FIG2)
        assert g.winners[0][0] == INVALID and g.winners[1][0] == TIE
        assert np.isnan(g.values[0, 0]).all()

    def test_deterministic_across_threads(self):
        a = curve([(0.02, 0.45), (0.05, 0.6), (0.5, 0.75)], "a")
        b = curve([(0.05, 0.35), (0.2, 0.6), (0.3, 0.97)], "b")
        g1 = self.grid({"a": a, "b": b}, n_jobs=1)
        g4 = self.grid({"a": a, "b": b}, n_jobs=4)
        assert g1.winners == g4.winners
        assert np.array_equal(g1.values, g4.values, equal_nan=True)

    def test_reserved_names(self):
        c = curve([(0.1, 0.6)], "x")
        with pytest.raises(ValueError, match="reserved"):
            self.grid({"tie": c, "b": c})

    def test_needs_two(self):
        with pytest.raises(ValueError):
            self.grid({"a": curve([(0.1, 0.6)], "a")})


class TestThreadCount:
    def test_default(self, monkeypatch):
        monkeypatch.delenv("PVOROS_THREADS", raising=False)
        assert thread_count() == 1
        assert thread_count(3) == 3

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("PVOROS_THREADS", "2")
        assert thread_count(8) == 2
        assert thread_count() == 2

    @pytest.mark.parametrize("bad", ["x", "0", "-3"])
    def test_invalid(self, monkeypatch, bad):
        monkeypatch.setenv("PVOROS_THREADS", bad)
        with pytest.raises(ValueError, match="PVOROS_THREADS"):
            thread_count()
