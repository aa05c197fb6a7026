import numpy as np
import pytest
from sklearn.base import clone

from pvoros import AssumptionError, ModelSelector, PartialVOROSThreshold, partial_voros_score
from pvoros.io import synth_generate


@pytest.fixture(scope="module")
def data():
    _, wide, y = synth_generate(1000, 9000, mu1=1.0, sigma1=2.2, seed=5)
    _, narrow, _ = synth_generate(1000, 9000, mu1=1.7, sigma1=0.7, seed=6)
    return np.c_[wide, narrow], y


class TestPartialVOROSThreshold:
    def test_params_round_trip(self):
        est = PartialVOROSThreshold(alpha=0.2, kappa=500, kappa_frac=None)
        assert clone(est).get_params() == est.get_params()

    def test_fit_predict_score(self, data):
        X, y = data
        est = PartialVOROSThreshold(alpha=0.15, kappa_frac=0.05, t_range=(0.5, 0.6)).fit(X[:, 1], y)
        assert 0 < est.pv_ <= 1
        assert est.region_.case.value == "Case1Triangle"
        pred = est.predict(X[:, 1])
        assert set(np.unique(pred)) <= {0, 1}
        # predictions respect the capacity bound used to fit
        assert pred.sum() <= 0.05 * len(y)
        assert -1 <= est.score(X[:, 1], y) <= 0

    def test_threshold_moves_with_t(self, data):
        X, y = data
        est = PartialVOROSThreshold(alpha=0.15, kappa_frac=0.3, t_range=(0.1, 0.6)).fit(X[:, 1], y)
        assert est.threshold_for(0.1) <= est.threshold_for(0.6)

    def test_matches_function(self, data):
        X, y = data
        est = PartialVOROSThreshold(alpha=0.15, kappa_frac=0.05).fit(X[:, 0], y)
        assert est.pv_ == partial_voros_score(y, X[:, 0], alpha=0.15, kappa_frac=0.05)

    def test_assumptions_checked(self, data):
        X, y = data
        with pytest.raises(AssumptionError):
            PartialVOROSThreshold(alpha=0.15, kappa_frac=0.05, t_range=(0.5, 0.7)).fit(X[:, 0], y)


class TestModelSelector:
    def test_fit(self, data):
        X, y = data
        sel = ModelSelector(alpha=0.15, kappa_frac=0.05, candidate_names=["wide", "narrow"]).fit(X, y)
        assert sel.best_name_ in ("wide", "narrow")
        assert sel.names_[sel.best_index_] == sel.best_name_
        assert set(sel.scores_) == {"wide", "narrow"}
        assert sel.predict(X).shape == y.shape
        assert -1 <= sel.score(X, y) <= 0

    def test_clone(self):
        sel = ModelSelector(strategy="MaxVOROS", cost_ratio_range=(1 / 9, 1 / 6), t_range=None)
        assert clone(sel).get_params()["strategy"] == "MaxVOROS"

    def test_name_count_mismatch(self, data):
        X, y = data
        with pytest.raises(ValueError):
            ModelSelector(candidate_names=["only"]).fit(X, y)
