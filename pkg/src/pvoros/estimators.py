"""scikit-learn style wrappers around the functional API.

Estimators here take a classifier's scores as ``X`` (a 1-d array or a single
column) and binary labels as ``y``.  They do not learn a scoring function;
``fit`` learns the cost-aware threshold policy on validation scores and
``predict`` applies it.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_scores_labels
from .feasible_region import Constraints, check_practical, region_polygon
from .roc_core import DatasetProfile, build_roc_curve
from .selection import CandidateSet, Strategy, expected_test_cost, select_model, strategy_policy
from .voros import CostSpec, feasible_hull, partial_voros


def _cost_spec(t_range, cost_ratio_range, profile, resolution, samples, random_state):
    if (t_range is None) == (cost_ratio_range is None):
        raise ValueError("set exactly one of t_range or cost_ratio_range")
    if t_range is not None:
        return CostSpec.uniform_t(*t_range, resolution=resolution)
    seed = 0 if random_state is None else int(random_state)
    return CostSpec.cost_ratio(*cost_ratio_range, profile, samples=samples, seed=seed, resolution=resolution)


def _constraints(alpha, kappa, kappa_frac, profile):
    if (kappa is None) == (kappa_frac is None):
        raise ValueError("set exactly one of kappa or kappa_frac")
    if kappa is not None:
        return Constraints(alpha, kappa)
    return Constraints.from_fraction(alpha, kappa_frac, profile)


def _scores_1d(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    return check_array(X, ensure_2d=False).astype(float)


def partial_voros_score(
    y_true,
    y_score,
    *,
    alpha,
    kappa=None,
    kappa_frac=None,
    t_range=(0.5, 0.6),
    cost_ratio_range=None,
    resolution=1025,
    samples=100_000,
    random_state=0,
):
    """Partial VOROS of scores ``y_score`` against labels ``y_true``.

    The class counts come from ``y_true``.  Exactly one of ``kappa`` and
    ``kappa_frac`` must be set, and ``t_range`` is ignored once
    ``cost_ratio_range`` is given.
    """
    scores, labels = check_scores_labels(y_score, y_true)
    profile = DatasetProfile.from_labels(labels)
    if cost_ratio_range is not None:
        t_range = None
    spec = _cost_spec(t_range, cost_ratio_range, profile, resolution, samples, random_state)
    con = _constraints(alpha, kappa, kappa_frac, profile)
    check_practical(profile, con, t_max=spec.t_support[1])
    return partial_voros(build_roc_curve(scores, labels), region_polygon(profile, con), spec)


class PartialVOROSThreshold(ClassifierMixin, BaseEstimator):
    """Cost-range-aware decision threshold for a fixed scoring model.

    ``fit`` builds the feasible region from the label counts, the ROC curve
    of the scores, and the policy giving the cheapest feasible threshold for
    each cost parameter in the range.  ``predict`` binarizes at ``tau(t)``;
    without ``t`` it uses the middle of the range.

    Attributes set by ``fit``: ``profile_``, ``region_``, ``spec_``,
    ``curve_``, ``hull_``, ``policy_``, ``pv_`` and ``classes_``.
    """

    def __init__(
        self,
        alpha=0.15,
        kappa=None,
        kappa_frac=0.3,
        t_range=(0.5, 0.6),
        cost_ratio_range=None,
        resolution=1025,
        samples=100_000,
        random_state=0,
    ):
        self.alpha = alpha
        self.kappa = kappa
        self.kappa_frac = kappa_frac
        self.t_range = t_range
        self.cost_ratio_range = cost_ratio_range
        self.resolution = resolution
        self.samples = samples
        self.random_state = random_state

    def fit(self, X, y):
        scores, labels = check_scores_labels(_scores_1d(X), y)
        self.profile_ = DatasetProfile.from_labels(labels)
        kappa_frac = None if self.kappa is not None else self.kappa_frac
        t_range = None if self.cost_ratio_range is not None else self.t_range
        self.spec_ = _cost_spec(
            t_range, self.cost_ratio_range, self.profile_, self.resolution, self.samples, self.random_state
        )
        con = _constraints(self.alpha, self.kappa, kappa_frac, self.profile_)
        check_practical(self.profile_, con, t_max=self.spec_.t_support[1])
        self.region_ = region_polygon(self.profile_, con)
        self.curve_ = build_roc_curve(scores, labels)
        self.hull_ = feasible_hull(self.curve_, self.region_)
        self.policy_ = strategy_policy(Strategy.MAX_PV, self.curve_, self.region_, self.spec_)
        self.pv_ = partial_voros(self.curve_, self.region_, self.spec_)
        self.classes_ = np.array([0, 1])
        return self

    def _default_t(self):
        lo, hi = self.spec_.t_support
        return (lo + hi) / 2

    def threshold_for(self, t=None):
        check_is_fitted(self, "policy_")
        t = self._default_t() if t is None else t
        return float(self.policy_.threshold_at(t)[0])

    def predict(self, X, t=None):
        scores = _scores_1d(X)
        return (scores >= self.threshold_for(t)).astype(int)

    def score(self, X, y, sample_weight=None):
        """Negative expected cost of the fitted policy on ``(X, y)`` (higher is better)."""
        check_is_fitted(self, "policy_")
        if sample_weight is not None:
            raise ValueError("sample weights are not supported")
        return -expected_test_cost(self.policy_, _scores_1d(X), y, self.spec_)


class ModelSelector(BaseEstimator):
    """Pick one of several scoring models by a selection strategy.

    ``X`` holds one column of validation scores per candidate; columns are
    named by ``candidate_names`` (default ``m0``, ``m1``, ...).  After
    ``fit`` the winning column is ``best_index_`` and its policy ``policy_``.
    """

    def __init__(
        self,
        strategy="MaxPV",
        alpha=0.15,
        kappa=None,
        kappa_frac=0.3,
        t_range=(0.5, 0.6),
        cost_ratio_range=None,
        candidate_names=None,
        resolution=1025,
        samples=100_000,
        random_state=0,
    ):
        self.strategy = strategy
        self.alpha = alpha
        self.kappa = kappa
        self.kappa_frac = kappa_frac
        self.t_range = t_range
        self.cost_ratio_range = cost_ratio_range
        self.candidate_names = candidate_names
        self.resolution = resolution
        self.samples = samples
        self.random_state = random_state

    def _names(self, n):
        names = list(self.candidate_names) if self.candidate_names is not None else [f"m{i}" for i in range(n)]
        if len(names) != n:
            raise ValueError(f"got {len(names)} candidate names for {n} score columns")
        return names

    def fit(self, X, y):
        X = check_array(X, dtype=float)
        labels = check_scores_labels(X[:, 0], y)[1]
        names = self._names(X.shape[1])
        self.profile_ = DatasetProfile.from_labels(labels)
        kappa_frac = None if self.kappa is not None else self.kappa_frac
        t_range = None if self.cost_ratio_range is not None else self.t_range
        self.spec_ = _cost_spec(
            t_range, self.cost_ratio_range, self.profile_, self.resolution, self.samples, self.random_state
        )
        con = _constraints(self.alpha, self.kappa, kappa_frac, self.profile_)
        check_practical(self.profile_, con, t_max=self.spec_.t_support[1])
        self.region_ = region_polygon(self.profile_, con)
        cands = CandidateSet.from_scores({n: (X[:, i], labels) for i, n in enumerate(names)})
        self.report_ = select_model(cands, Strategy(self.strategy), self.region_, self.spec_)
        self.names_ = names
        self.best_name_ = self.report_.winner
        self.best_index_ = names.index(self.best_name_)
        self.policy_ = self.report_.policy
        self.scores_ = dict(self.report_.scores)
        return self

    def predict(self, X, t=None):
        """Alerts from the winning column at cost parameter ``t`` (range middle by default)."""
        check_is_fitted(self, "policy_")
        X = check_array(X, dtype=float)
        lo, hi = self.spec_.t_support
        t = (lo + hi) / 2 if t is None else t
        tau = float(self.policy_.threshold_at(t)[0])
        return (X[:, self.best_index_] >= tau).astype(int)

    def score(self, X, y):
        """Negative expected cost of the selected policy on held-out columns."""
        check_is_fitted(self, "policy_")
        X = check_array(X, dtype=float)
        return -expected_test_cost(self.policy_, X[:, self.best_index_], y, self.spec_)


__all__ = ["PartialVOROSThreshold", "ModelSelector", "partial_voros_score"]
