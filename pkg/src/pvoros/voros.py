"""Partial VOROS: normalized lesser-classifier area averaged over cost parameters.

At each ``t`` the curve is represented by its cheapest feasible operating
point.  Those points come from the upper hull of the feasible points, where
each hull vertex owns an interval of ``t`` bounded by the slopes of its two
adjacent hull segments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import check_fraction
from .exceptions import AssumptionError, NoFeasiblePointWarning
from .feasible_region import FeasibleRegion, unconstrained_region
from .partial_area import lesser_areas
from .roc_core import RATE_TOL, DatasetProfile, HullCurve, RocCurve, RocPoint, slope_to_t, t_from_cost_ratio, upper_chain

UNIFORM_T = "uniform_t"
COST_RATIO = "cost_ratio"


@dataclass(frozen=True)
class CostSpec:
    """Distribution over the fractional cost parameter ``t``.

    ``uniform_t`` spreads ``t`` evenly over ``[low, high]`` and is integrated
    with the composite trapezoid rule on ``resolution`` nodes.  ``cost_ratio``
    draws the ratio C0/C1 uniformly from ``[low, high]`` and maps each draw to
    ``t`` through the class counts in ``profile``; by default it is averaged
    over ``samples`` seeded Monte-Carlo draws, or with ``method="quadrature"``
    by the trapezoid rule on an even grid of ratios.
    """

    kind: str
    low: float
    high: float
    profile: Optional[DatasetProfile] = None
    resolution: int = 1025
    samples: int = 100_000
    seed: int = 0
    method: str = "mc"

    def __post_init__(self):
        if self.kind == UNIFORM_T:
            check_fraction(self.low, "t low")
            check_fraction(self.high, "t high")
        elif self.kind == COST_RATIO:
            if not (self.low > 0 and np.isfinite(self.high)):
                raise ValueError(f"cost-ratio bounds must be positive and finite, got [{self.low}, {self.high}]")
            if self.profile is None:
                raise ValueError("a cost-ratio spec needs the dataset profile to map ratios to t")
            if self.method not in ("mc", "quadrature"):
                raise ValueError(f"method must be 'mc' or 'quadrature', got {self.method!r}")
        else:
            raise ValueError(f"unknown cost spec kind {self.kind!r}")
        if not self.low < self.high:
            raise ValueError(f"need low < high, got [{self.low}, {self.high}]")
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")

    @classmethod
    def uniform_t(cls, low, high, resolution=1025) -> "CostSpec":
        return cls(UNIFORM_T, float(low), float(high), resolution=resolution)

    @classmethod
    def cost_ratio(cls, low, high, profile, samples=100_000, seed=0, method="mc", resolution=1025) -> "CostSpec":
        return cls(COST_RATIO, float(low), float(high), profile, resolution, samples, seed, method)

    @property
    def is_monte_carlo(self) -> bool:
        return self.kind == COST_RATIO and self.method == "mc"

    @property
    def t_support(self) -> tuple:
        if self.kind == UNIFORM_T:
            return (self.low, self.high)
        return (t_from_cost_ratio(self.low, self.profile), t_from_cost_ratio(self.high, self.profile))

    def _ratios_to_t(self, r):
        w = r * self.profile.n_neg
        return w / (w + self.profile.n_pos)

    def nodes(self):
        """Evaluation points and weights (weights sum to one)."""
        if self.kind == UNIFORM_T:
            t = np.linspace(self.low, self.high, self.resolution)
            return t, _trapezoid_weights(self.resolution)
        if self.method == "quadrature":
            r = np.linspace(self.low, self.high, self.resolution)
            return self._ratios_to_t(r), _trapezoid_weights(self.resolution)
        rng = np.random.default_rng(self.seed)
        r = rng.uniform(self.low, self.high, self.samples)
        return self._ratios_to_t(r), np.full(self.samples, 1.0 / self.samples)

    def t_density(self, t):
        """Density of ``t`` induced by a uniform cost ratio (zero outside the support)."""
        t = np.asarray(t, dtype=float)
        if self.kind == UNIFORM_T:
            inside = (t >= self.low) & (t <= self.high)
            return np.where(inside, 1.0 / (self.high - self.low), 0.0)
        P, N = self.profile.n_pos, self.profile.n_neg
        lo, hi = self.t_support
        inside = (t >= lo) & (t <= hi)
        with np.errstate(divide="ignore"):
            dens = P / (N * (1 - t) ** 2 * (self.high - self.low))
        return np.where(inside, dens, 0.0)

    def describe(self) -> dict:
        out = {"kind": self.kind, "low": self.low, "high": self.high, "t_support": list(self.t_support)}
        if self.kind == UNIFORM_T:
            out["resolution"] = self.resolution
        else:
            out["method"] = self.method
            if self.is_monte_carlo:
                out.update(samples=self.samples, seed=self.seed)
            else:
                out["resolution"] = self.resolution
        return out


def _trapezoid_weights(n):
    w = np.full(n, 1.0 / (n - 1))
    w[0] = w[-1] = 0.5 / (n - 1)
    return w


@dataclass(frozen=True)
class OptimalRange:
    point: RocPoint
    t_low: float
    t_high: float
    threshold: float = np.nan
    index: int = 0


@dataclass(frozen=True)
class PolicyEntry:
    t_low: float
    t_high: float
    point: RocPoint
    threshold: float


@dataclass(frozen=True)
class ThresholdPolicy:
    """Piecewise-constant map from cost parameter to decision threshold."""

    entries: tuple
    curve_id: str = ""

    def __len__(self):
        return len(self.entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def entry_index(self, t):
        """Index of the entry responsible for each ``t`` (nearest entry outside the support)."""
        if self.is_empty:
            raise ValueError("empty threshold policy")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lows = np.array([e.t_low for e in self.entries])
        order = np.argsort(lows)
        pos = np.searchsorted(lows[order], t, side="right") - 1
        return order[np.clip(pos, 0, len(order) - 1)]

    def threshold_at(self, t):
        thr = np.array([e.threshold for e in self.entries])
        return thr[self.entry_index(t)]

    def to_dict(self) -> dict:
        return {
            "curve": self.curve_id,
            "entries": [
                {
                    "t_low": e.t_low,
                    "t_high": e.t_high,
                    "fpr": e.point.fpr,
                    "tpr": e.point.tpr,
                    "threshold": e.threshold,
                }
                for e in self.entries
            ],
        }


def _feasible_points(curve: RocCurve, region: FeasibleRegion, interpolate: bool):
    fpr, tpr = curve.fpr, curve.tpr
    thr = curve.thresholds if curve.thresholds is not None else np.full(fpr.shape, np.nan)
    mask = region.contains(fpr, tpr)
    xs = [np.zeros(1), fpr[mask]]
    ys = [np.zeros(1), tpr[mask]]
    ts = [np.full(1, np.inf), thr[mask]]
    if interpolate:
        extra = _boundary_crossings(fpr, tpr, region)
        if extra:
            ex = np.array(extra)
            xs.append(ex[:, 0])
            ys.append(ex[:, 1])
            ts.append(np.full(len(extra), np.nan))
    return np.concatenate(xs), np.concatenate(ys), np.concatenate(ts)


def _boundary_crossings(fpr, tpr, region):
    """Feasible points where curve segments cross the precision or capacity line."""
    prof, con = region.profile, region.constraints
    lines = []
    if 0 < con.alpha < 1:
        lines.append((con.alpha * prof.n_neg, -(1 - con.alpha) * prof.n_pos, 0.0))
    if con.kappa < prof.n_total:
        lines.append((float(prof.n_neg), float(prof.n_pos), con.kappa))
    out = []
    for a, b, c in lines:
        f = a * fpr + b * tpr - c
        f0, f1 = f[:-1], f[1:]
        idx = np.flatnonzero((f0 > 0) != (f1 > 0))
        for i in idx:
            r = f0[i] / (f0[i] - f1[i])
            x = fpr[i] + r * (fpr[i + 1] - fpr[i])
            y = tpr[i] + r * (tpr[i + 1] - tpr[i])
            x, y = min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0)
            if region.contains(x, y):
                out.append((x, y))
    return out


def feasible_hull(curve: RocCurve, region: FeasibleRegion, interpolate: bool = False) -> HullCurve:
    """Upper hull of the feasible operating points, cut at the highest one.

    With ``interpolate=True`` the curve is treated as a polyline whose every
    point is attainable, so feasible crossings of the region boundary join
    the candidate set.
    """
    x, y, thr = _feasible_points(curve, region, interpolate)
    idx = upper_chain(x, y)
    thr = thr[idx] if curve.thresholds is not None else None
    return _drop_infeasible(HullCurve(x[idx], y[idx], thr, curve.name), region)


def _drop_infeasible(hull: HullCurve, region: FeasibleRegion) -> HullCurve:
    mask = region.contains(hull.fpr, hull.tpr)
    mask[0] = True
    # hull vertices beyond the first infeasible one are never optimal among feasible points
    stop = np.argmin(mask) if not mask.all() else mask.size
    keep = np.arange(stop)
    top = int(np.argmax(hull.tpr[keep]))
    keep = keep[: top + 1]
    thr = None if hull.thresholds is None else hull.thresholds[keep]
    return HullCurve(hull.fpr[keep], hull.tpr[keep], thr, hull.name)


def _breakpoints(hull: HullCurve):
    dx = np.diff(hull.fpr)
    dy = np.diff(hull.tpr)
    return slope_to_t(dx, dy)


def optimal_t_ranges(hull: HullCurve, region: FeasibleRegion) -> list[OptimalRange]:
    """Cost-parameter interval on which each feasible hull vertex is cheapest.

    A segment with slope ``s`` hands over at ``t = s / (1 + s)``.  Infeasible
    hull vertices are skipped; zero-width intervals are dropped.
    """
    hull = _drop_infeasible(hull, region)
    bps = _breakpoints(hull)
    highs = np.concatenate([[1.0], bps])
    lows = np.concatenate([bps, [0.0]])
    out = []
    thr = hull.thresholds
    for i in range(hull.fpr.size):
        if highs[i] > lows[i] or hull.fpr.size == 1:
            out.append(
                OptimalRange(
                    RocPoint(float(hull.fpr[i]), float(hull.tpr[i])),
                    float(lows[i]),
                    float(highs[i]),
                    float(thr[i]) if thr is not None else np.nan,
                    i,
                )
            )
    return out


def _select_vertices(hull: HullCurve, t):
    """Hull vertex index that minimizes cost at each ``t``."""
    bps = _breakpoints(hull)  # strictly decreasing
    asc = bps[::-1]
    return bps.size - np.searchsorted(asc, t, side="right")


def cheapest_feasible_point(curve: RocCurve, region: FeasibleRegion, t) -> RocPoint:
    """Minimum-cost feasible operating point of ``curve`` at a single ``t``."""
    hull = feasible_hull(curve, region)
    j = int(_select_vertices(hull, np.array([float(t)]))[0])
    return RocPoint(float(hull.fpr[j]), float(hull.tpr[j]))


def best_normalized_areas(curve: RocCurve, region: FeasibleRegion, t, *, interpolate=False, hull=None):
    """Largest normalized lesser-classifier area over the curve's feasible points, per ``t``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if hull is None:
        hull = feasible_hull(curve, region, interpolate)
    idx = _select_vertices(hull, t)
    out = np.zeros_like(t)
    for j in np.unique(idx):
        sel = idx == j
        out[sel] = lesser_areas((hull.fpr[j], hull.tpr[j]), t[sel], region)
    return out / region.area


def check_spec_for_region(spec: CostSpec, region: FeasibleRegion):
    """Reject cost ranges reaching past the never-alarm bound of ``region``."""
    lo, hi = spec.t_support
    bound = region.t_bound
    if hi > bound + RATE_TOL:
        raise AssumptionError(
            f"cost parameter range [{lo:.17g}, {hi:.17g}] exceeds the never-alarm bound "
            f"t <= alpha|N|/(alpha|N|+(1-alpha)|P|) = {bound:.17g}"
        )


def partial_voros(curve: RocCurve, region: FeasibleRegion, spec: CostSpec, *, interpolate=False) -> float:
    """Partial volume over the ROC surface, in [0, 1].

    Warns with :class:`NoFeasiblePointWarning` (and returns 0) when only the
    never-alarm point is feasible.
    """
    check_spec_for_region(spec, region)
    hull = feasible_hull(curve, region, interpolate)
    if hull.fpr.size == 1:
        warnings.warn(
            f"curve {curve.name!r} has no feasible operating point besides never alarming",
            NoFeasiblePointWarning,
            stacklevel=2,
        )
        return 0.0
    t, w = spec.nodes()
    return float(np.dot(w, best_normalized_areas(curve, region, t, hull=hull)))


def voros_unconstrained(curve: RocCurve, spec: CostSpec) -> float:
    """VOROS over the whole unit square (no precision floor or capacity limit)."""
    region = unconstrained_region(spec.profile)
    t, w = spec.nodes()
    return float(np.dot(w, best_normalized_areas(curve, region, t)))


def threshold_policy(curve: RocCurve, region: FeasibleRegion, spec: CostSpec) -> ThresholdPolicy:
    """Cheapest feasible decision threshold for each part of the cost range."""
    if not curve.has_thresholds:
        raise ValueError(
            f"curve {curve.name!r} has no threshold provenance; build it from scores, "
            "or evaluate metrics from the raw points only"
        )
    hull = feasible_hull(curve, region)
    lo, hi = spec.t_support
    if hull.fpr.size == 1:
        warnings.warn(
            f"curve {curve.name!r} has no feasible operating point besides never alarming",
            NoFeasiblePointWarning,
            stacklevel=2,
        )
        return ThresholdPolicy((), curve.name)
    entries = []
    for rng in optimal_t_ranges(hull, region):
        a, b = max(rng.t_low, lo), min(rng.t_high, hi)
        if a < b:
            entries.append(PolicyEntry(a, b, rng.point, rng.threshold))
    entries.sort(key=lambda e: e.t_low)
    return ThresholdPolicy(tuple(entries), curve.name)


def constant_policy(point, threshold, spec: CostSpec, curve_id="") -> ThresholdPolicy:
    lo, hi = spec.t_support
    return ThresholdPolicy((PolicyEntry(lo, hi, RocPoint(*map(float, point)), float(threshold)),), curve_id)


__all__ = [
    "CostSpec",
    "OptimalRange",
    "PolicyEntry",
    "ThresholdPolicy",
    "feasible_hull",
    "optimal_t_ranges",
    "best_normalized_areas",
    "cheapest_feasible_point",
    "partial_voros",
    "voros_unconstrained",
    "threshold_policy",
    "constant_policy",
    "check_spec_for_region",
]
