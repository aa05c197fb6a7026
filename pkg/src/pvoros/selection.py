"""Choosing one classifier among many, and checking the choice on held-out data.

Four strategies rank candidate validation curves: partial VOROS (aware of
both the cost range and the region), plain VOROS (cost aware only), and
feasible recall / feasible pAUROC (region aware only).  The winner is then
turned into a threshold policy and can be scored by its expected cost on a
test split.
"""

from __future__ import annotations

import enum
import os
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from joblib import Parallel, delayed

from ._validation import check_scores_labels
from .exceptions import DegenerateRegionError, NoFeasiblePointWarning
from .feasible_region import Constraints, FeasibleRegion, practical_violations, region_polygon
from .roc_core import DatasetProfile, RocCurve, build_roc_curve
from .voros import CostSpec, ThresholdPolicy, constant_policy, partial_voros, threshold_policy, voros_unconstrained

TIE = "tie"
INVALID = "invalid"
NO_FEASIBLE_CANDIDATE = "no feasible candidate"
NO_THRESHOLDS = "no threshold provenance"


class Strategy(str, enum.Enum):
    MAX_PV = "MaxPV"
    MAX_VOROS = "MaxVOROS"
    MAX_FEASIBLE_RECALL = "MaxFeasibleRecall"
    MAX_FEASIBLE_PAUROC = "MaxFeasiblePAUROC"

    def __str__(self):
        return self.value


ALL_STRATEGIES = tuple(Strategy)


def thread_count(n_jobs: Optional[int] = None) -> int:
    """Worker count, capped by the ``PVOROS_THREADS`` environment variable."""
    cap = os.environ.get("PVOROS_THREADS")
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError:
            raise ValueError(f"PVOROS_THREADS must be a positive integer, got {cap!r}") from None
        if cap < 1:
            raise ValueError(f"PVOROS_THREADS must be a positive integer, got {cap}")
    if n_jobs is None:
        return cap or 1
    n_jobs = int(n_jobs)
    if n_jobs < 1:
        n_jobs = os.cpu_count() or 1
    return min(n_jobs, cap) if cap else n_jobs


@dataclass(frozen=True, eq=False)
class Candidate:
    """A named validation curve with optional test scores."""

    name: str
    curve: RocCurve
    test_scores: Optional[np.ndarray] = None
    test_labels: Optional[np.ndarray] = None

    @property
    def has_test(self) -> bool:
        return self.test_scores is not None


class CandidateSet:
    """Ordered collection of uniquely named candidates."""

    def __init__(self, candidates=()):
        self._items: dict[str, Candidate] = {}
        for c in candidates:
            self.add(c)

    def add(self, candidate: Candidate):
        if not candidate.name:
            raise ValueError("candidate names must be non-empty")
        if candidate.name in self._items:
            raise ValueError(f"duplicate candidate name {candidate.name!r}")
        self._items[candidate.name] = candidate

    @classmethod
    def from_scores(cls, validation: Mapping, test: Optional[Mapping] = None) -> "CandidateSet":
        """Build from ``{name: (scores, labels)}`` mappings; test entries pair by name."""
        test = dict(test or {})
        unknown = sorted(set(test) - set(validation))
        if unknown:
            raise ValueError(f"test entries without a validation curve: {unknown}")
        out = cls()
        for name, (scores, labels) in validation.items():
            ts = tl = None
            if name in test:
                ts, tl = check_scores_labels(*test[name])
            out.add(Candidate(name, build_roc_curve(scores, labels, name=name), ts, tl))
        return out

    @classmethod
    def from_curves(cls, curves: Mapping) -> "CandidateSet":
        return cls(Candidate(name, curve) for name, curve in curves.items())

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items.values())

    def __getitem__(self, name) -> Candidate:
        return self._items[name]

    def __contains__(self, name):
        return name in self._items

    @property
    def names(self) -> list:
        return list(self._items)

    def curves(self) -> dict:
        return {c.name: c.curve for c in self}


def _feasible_arrays(curve: RocCurve, region: FeasibleRegion):
    mask = region.contains(curve.fpr, curve.tpr)
    idx = np.flatnonzero(mask)
    return curve.fpr[idx], curve.tpr[idx], idx


def feasible_recall(curve: RocCurve, region: FeasibleRegion) -> float:
    """Highest true-positive rate among feasible curve points (0 when none)."""
    _, y, _ = _feasible_arrays(curve, region)
    return float(y.max()) if y.size else 0.0


def feasible_pauroc(curve: RocCurve, region: FeasibleRegion) -> float:
    """Trapezoidal area under the feasible curve points, anchored at the origin.

    The polyline runs through ``(0, 0)`` and every feasible point in fpr
    order, so the area covers only the fpr span those points reach.
    """
    x, y, _ = _feasible_arrays(curve, region)
    x = np.concatenate([[0.0], x])
    y = np.concatenate([[0.0], y])
    order = np.lexsort((y, x))
    x, y = x[order], y[order]
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2))


def _recall_index(curve, region):
    x, y, idx = _feasible_arrays(curve, region)
    if not idx.size:
        return None
    best = np.lexsort((x, -y))[0]  # max tpr, then lowest fpr
    return int(idx[best])


def _knee_index(curve, region):
    x, y, idx = _feasible_arrays(curve, region)
    if not idx.size:
        return None
    dist = np.hypot(x, 1 - y)
    best = np.lexsort((x, dist))[0]
    return int(idx[best])


def _quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoFeasiblePointWarning)
        return fn(*args, **kwargs)


def strategy_metric(strategy: Strategy, curve: RocCurve, region: FeasibleRegion, spec: CostSpec) -> float:
    strategy = Strategy(strategy)
    if strategy is Strategy.MAX_PV:
        return _quiet(partial_voros, curve, region, spec)
    if strategy is Strategy.MAX_VOROS:
        return voros_unconstrained(curve, spec)
    if strategy is Strategy.MAX_FEASIBLE_RECALL:
        return feasible_recall(curve, region)
    return feasible_pauroc(curve, region)


def strategy_policy(strategy: Strategy, curve: RocCurve, region: FeasibleRegion, spec: CostSpec) -> ThresholdPolicy:
    """Threshold policy a strategy deploys for its chosen curve.

    Cost-aware strategies pick the cheapest feasible threshold at every
    ``t``; the others hold one threshold for the whole range.
    """
    strategy = Strategy(strategy)
    if not curve.has_thresholds:
        raise ValueError(f"curve {curve.name!r} has no threshold provenance")
    if strategy in (Strategy.MAX_PV, Strategy.MAX_VOROS):
        return _quiet(threshold_policy, curve, region, spec)
    pick = _recall_index if strategy is Strategy.MAX_FEASIBLE_RECALL else _knee_index
    i = pick(curve, region)
    if i is None:
        return ThresholdPolicy((), curve.name)
    return constant_policy((curve.fpr[i], curve.tpr[i]), curve.thresholds[i], spec, curve.name)


def expected_test_cost(policy: ThresholdPolicy, scores, labels, spec: CostSpec, return_stderr=False):
    """Average normalized cost of deploying ``policy`` on test scores.

    Each ``t`` node (or Monte-Carlo draw) binarizes the scores at ``tau(t)``,
    predicting positive when ``score >= tau``.  The standard error is zero
    for deterministic quadrature.
    """
    if policy.is_empty:
        raise ValueError(f"threshold policy for {policy.curve_id!r} is empty; nothing to deploy")
    scores, labels = check_scores_labels(scores, labels)
    pos = labels == 1
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    t, w = spec.nodes()
    entry = policy.entry_index(t)
    h = np.empty(len(policy))
    k = np.empty(len(policy))
    for j, e in enumerate(policy.entries):
        alarm = scores >= e.threshold
        k[j] = np.count_nonzero(alarm & pos) / n_pos
        h[j] = np.count_nonzero(alarm & ~pos) / n_neg
    c = t * h[entry] + (1 - t) * (1 - k[entry])
    mean = float(np.dot(w, c))
    if not return_stderr:
        return mean
    stderr = float(np.std(c, ddof=1) / np.sqrt(c.size)) if spec.is_monte_carlo and c.size > 1 else 0.0
    return mean, stderr


@dataclass(frozen=True)
class SelectionReport:
    strategy: Strategy
    winner: Optional[str]
    value: float
    scores: dict
    policy: Optional[ThresholdPolicy]
    test_cost: Optional[float] = None
    test_stderr: Optional[float] = None
    mc_seed: Optional[int] = None
    mc_samples: Optional[int] = None
    flags: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "strategy": str(self.strategy),
            "winner": self.winner,
            "value": self.value,
            "scores": dict(self.scores),
            "policy": None if self.policy is None else self.policy.to_dict(),
            "test_cost": self.test_cost,
            "test_stderr": self.test_stderr,
            "mc_seed": self.mc_seed,
            "mc_samples": self.mc_samples,
            "flags": list(self.flags),
        }


def _argmax_by_name(scores: Mapping) -> str:
    return min(scores, key=lambda name: (-scores[name], name))


def select_model(
    candidates: CandidateSet,
    strategy,
    region: FeasibleRegion,
    spec: CostSpec,
    *,
    scores: Optional[Mapping] = None,
    evaluate_test=True,
) -> SelectionReport:
    """Pick the candidate maximizing ``strategy`` on validation curves.

    Ties go to the lexicographically smallest name.  Precomputed metric
    values may be passed as ``scores`` to avoid recomputation.
    """
    strategy = Strategy(strategy)
    if len(candidates) == 0:
        raise ValueError("need at least one candidate")
    if scores is None:
        scores = {c.name: strategy_metric(strategy, c.curve, region, spec) for c in candidates}
    winner = _argmax_by_name(scores)
    flags = []
    if strategy is Strategy.MAX_PV and all(v == 0 for v in scores.values()):
        flags.append(NO_FEASIBLE_CANDIDATE)
    cand = candidates[winner]
    policy = None
    if cand.curve.has_thresholds:
        policy = strategy_policy(strategy, cand.curve, region, spec)
    else:
        flags.append(NO_THRESHOLDS)
    cost = stderr = None
    if evaluate_test and cand.has_test and policy is not None and not policy.is_empty:
        cost, stderr = expected_test_cost(policy, cand.test_scores, cand.test_labels, spec, return_stderr=True)
    mc = spec.is_monte_carlo
    return SelectionReport(
        strategy,
        winner,
        float(scores[winner]),
        dict(scores),
        policy,
        cost,
        stderr,
        spec.seed if mc else None,
        spec.samples if mc else None,
        tuple(flags),
    )


@dataclass(frozen=True, eq=False)
class HeatmapGrid:
    """Per-cell winners of a precision floor by capacity sweep.

    ``values`` has shape ``(len(alphas), len(kappas), len(names))`` and holds
    NaN for cells that break the practical assumptions.
    """

    alphas: np.ndarray
    kappas: np.ndarray
    kappa_is_fraction: bool
    names: tuple
    winners: tuple
    values: np.ndarray
    epsilon: float

    def winner_set(self) -> set:
        return {w for row in self.winners for w in row} - {TIE, INVALID}

    def count(self, label) -> int:
        return sum(w == label for row in self.winners for w in row)

    def rows(self):
        """Flat ``(alpha, kappa, winner, values)`` records in grid order."""
        for i, a in enumerate(self.alphas):
            for j, k in enumerate(self.kappas):
                yield float(a), float(k), self.winners[i][j], self.values[i, j]


def _cell(curves, names, profile, alpha, kappa, spec, epsilon):
    n = len(names)
    con = Constraints(alpha, kappa)
    if practical_violations(profile, con, t_max=spec.t_support[1]):
        return INVALID, np.full(n, np.nan)
    try:
        region = region_polygon(profile, con)
    except DegenerateRegionError:
        return INVALID, np.full(n, np.nan)
    vals = np.array([_quiet(partial_voros, curves[name], region, spec) for name in names])
    order = sorted(range(n), key=lambda i: (-vals[i], names[i]))
    if vals[order[0]] - vals[order[1]] <= epsilon:
        return TIE, vals
    return names[order[0]], vals


def win_heatmap(
    candidates,
    alphas,
    kappas,
    spec: CostSpec,
    profile: DatasetProfile,
    *,
    epsilon=0.01,
    kappa_is_fraction=True,
    n_jobs=None,
) -> HeatmapGrid:
    """Partial-VOROS winner for every (alpha, kappa) cell.

    A cell is a tie when the top two values differ by at most ``epsilon``.
    Cells whose bounds or cost range break the practical assumptions are
    marked invalid.  Cells are independent and evaluated on up to
    :func:`thread_count` threads.
    """
    curves = candidates.curves() if isinstance(candidates, CandidateSet) else dict(candidates)
    if len(curves) < 2:
        raise ValueError("a heatmap needs at least two candidates")
    names = tuple(sorted(curves))
    reserved = {TIE, INVALID} & set(names)
    if reserved:
        raise ValueError(f"candidate names {sorted(reserved)} are reserved for heatmap cells")
    alphas = np.asarray(alphas, dtype=float)
    kappas = np.asarray(kappas, dtype=float)
    counts = kappas * profile.n_total if kappa_is_fraction else kappas
    cells = [(a, k) for a in alphas for k in counts]
    jobs = thread_count(n_jobs)
    out = Parallel(n_jobs=jobs, prefer="threads")(
        delayed(_cell)(curves, names, profile, a, k, spec, epsilon) for a, k in cells
    )
    winners = tuple(
        tuple(out[i * kappas.size + j][0] for j in range(kappas.size)) for i in range(alphas.size)
    )
    values = np.array([v for _, v in out]).reshape(alphas.size, kappas.size, len(names))
    return HeatmapGrid(alphas, kappas, kappa_is_fraction, names, winners, values, float(epsilon))


__all__ = [
    "Strategy",
    "ALL_STRATEGIES",
    "Candidate",
    "CandidateSet",
    "SelectionReport",
    "HeatmapGrid",
    "feasible_recall",
    "feasible_pauroc",
    "strategy_metric",
    "strategy_policy",
    "select_model",
    "expected_test_cost",
    "win_heatmap",
    "thread_count",
    "TIE",
    "INVALID",
]
