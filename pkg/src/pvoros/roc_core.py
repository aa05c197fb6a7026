"""ROC-space primitives: curves, upper hulls, normalized cost and iso-performance lines.

Points live in the unit square as ``(fpr, tpr)``.  A binarized classifier
predicts positive when ``score >= threshold``; the never-alarm operating
point ``(0, 0)`` carries threshold ``+inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._validation import check_fraction, check_scores_labels

RATE_TOL = 1e-12


@dataclass(frozen=True)
class DatasetProfile:
    """Class counts of an evaluation dataset."""

    n_pos: int
    n_neg: int

    def __post_init__(self):
        for name in ("n_pos", "n_neg"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
            object.__setattr__(self, name, int(value))

    @classmethod
    def from_labels(cls, labels) -> "DatasetProfile":
        labels = np.asarray(labels)
        n_pos = int(np.count_nonzero(labels == 1))
        return cls(n_pos=n_pos, n_neg=int(labels.size - n_pos))

    @property
    def n_total(self) -> int:
        return self.n_pos + self.n_neg

    @property
    def prevalence(self) -> float:
        return self.n_pos / self.n_total


class RocPoint(NamedTuple):
    fpr: float
    tpr: float


def as_point(point) -> RocPoint:
    """Coerce a 2-sequence to a validated :class:`RocPoint`."""
    fpr, tpr = point
    return RocPoint(check_fraction(fpr, "fpr"), check_fraction(tpr, "tpr"))


def _readonly(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RocCurve:
    """Ordered ROC operating points, optionally with the threshold behind each.

    Points are sorted by fpr then tpr and always include ``(0, 0)`` and ``(1, 1)``.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        fpr = _readonly(self.fpr)
        tpr = _readonly(self.tpr)
        if fpr.ndim != 1 or fpr.shape != tpr.shape or fpr.size == 0:
            raise ValueError("fpr and tpr must be non-empty 1-d arrays of equal length")
        if np.any((fpr < 0) | (fpr > 1) | (tpr < 0) | (tpr > 1)) or not np.all(np.isfinite(fpr + tpr)):
            raise ValueError("ROC coordinates must lie in [0, 1]")
        object.__setattr__(self, "fpr", fpr)
        object.__setattr__(self, "tpr", tpr)
        if self.thresholds is not None:
            thr = _readonly(self.thresholds)
            if thr.shape != fpr.shape:
                raise ValueError("thresholds must match the number of points")
            object.__setattr__(self, "thresholds", thr)

    @classmethod
    def from_points(cls, points, thresholds=None, name="") -> "RocCurve":
        """Build a curve from raw points, sorting them and adding the corner points."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        thr = None if thresholds is None else np.asarray(thresholds, dtype=float).reshape(-1)
        if thr is not None and thr.size != pts.shape[0]:
            raise ValueError("thresholds must match the number of points")
        has_origin = np.any((pts[:, 0] == 0) & (pts[:, 1] == 0))
        has_top = np.any((pts[:, 0] == 1) & (pts[:, 1] == 1))
        if not has_origin:
            pts = np.vstack([[0.0, 0.0], pts])
            if thr is not None:
                thr = np.concatenate([[np.inf], thr])
        if not has_top:
            pts = np.vstack([pts, [1.0, 1.0]])
            if thr is not None:
                thr = np.concatenate([thr, [-np.inf]])
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        pts = pts[order]
        if thr is not None:
            thr = thr[order]
        return cls(pts[:, 0], pts[:, 1], thr, name)

    @property
    def points(self) -> tuple:
        return tuple(RocPoint(float(x), float(y)) for x, y in zip(self.fpr, self.tpr))

    @property
    def has_thresholds(self) -> bool:
        return self.thresholds is not None

    def __len__(self):
        return self.fpr.size

    def auc(self) -> float:
        """Trapezoidal area under the curve."""
        return float(np.sum(np.diff(self.fpr) * (self.tpr[1:] + self.tpr[:-1]) / 2))


@dataclass(frozen=True, eq=False)
class HullCurve(RocCurve):
    """Upper convex hull of a curve, from ``(0, 0)`` rising to ``(1, 1)``.

    Only the first segment may be vertical (the climb along the y-axis);
    every later segment has strictly larger fpr and a strictly smaller slope.
    """


def build_roc_curve(scores, labels, name="") -> RocCurve:
    """Sweep the threshold from +inf down through every distinct score.

    Tied scores cross the threshold together and produce a single step.
    """
    scores, labels = check_scores_labels(scores, labels)
    order = np.argsort(-scores, kind="mergesort")
    s = scores[order]
    y = labels[order]
    # last index of each run of equal scores
    ends = np.flatnonzero(np.diff(s) != 0)
    ends = np.append(ends, s.size - 1)
    tp = np.cumsum(y, dtype=np.int64)[ends]
    fp = (ends + 1) - tp
    n_pos = int(tp[-1])
    n_neg = int(fp[-1])
    fpr = np.concatenate([[0.0], fp / n_neg])
    tpr = np.concatenate([[0.0], tp / n_pos])
    thresholds = np.concatenate([[np.inf], s[ends]])
    return RocCurve(fpr, tpr, thresholds, name)


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def upper_chain(fpr, tpr) -> np.ndarray:
    """Indices of the upper convex chain of a point set, left to right.

    Collinear and repeated points are dropped; among points sharing the
    smallest fpr the chain starts at the lowest one.
    """
    fpr = np.asarray(fpr, dtype=float)
    tpr = np.asarray(tpr, dtype=float)
    order = np.lexsort((tpr, fpr))
    chain: list[int] = []
    for i in order:
        x, y = fpr[i], tpr[i]
        if chain and fpr[chain[-1]] == x and tpr[chain[-1]] == y:
            continue
        while len(chain) >= 2:
            o, a = chain[-2], chain[-1]
            if _cross(fpr[o], tpr[o], fpr[a], tpr[a], x, y) >= 0:
                chain.pop()
            else:
                break
        chain.append(i)
    return np.array(chain, dtype=int)


def upper_hull(curve: RocCurve) -> HullCurve:
    """Monotone-chain upper hull of ``curve`` joined with ``(0, 0)`` and ``(1, 1)``.

    Equivalent to the upper chain of the convex hull of the curve together
    with ``(1, 0)``.  Collinear interior points are dropped.
    """
    fpr = np.concatenate([[0.0], curve.fpr, [1.0]])
    tpr = np.concatenate([[0.0], curve.tpr, [1.0]])
    thr = None
    if curve.thresholds is not None:
        thr = np.concatenate([[np.inf], curve.thresholds, [-np.inf]])
    idx = upper_chain(fpr, tpr)
    return HullCurve(fpr[idx], tpr[idx], None if thr is None else thr[idx], curve.name)


def cost(point, t) -> float:
    """Normalized cost ``t * fpr + (1 - t) * (1 - tpr)``."""
    h, k = as_point(point)
    t = check_fraction(t, "t")
    return t * h + (1 - t) * (1 - k)


def costs(fpr, tpr, t):
    """Vectorized :func:`cost` with numpy broadcasting."""
    t = np.asarray(t, dtype=float)
    return t * np.asarray(fpr) + (1 - t) * (1 - np.asarray(tpr))


def t_from_cost_ratio(ratio, profile: DatasetProfile) -> float:
    """Fractional cost parameter for a false-positive/false-negative cost ratio."""
    ratio = float(ratio)
    if not (ratio > 0 and math.isfinite(ratio)):
        raise ValueError(f"cost ratio C0/C1 must be finite and > 0, got {ratio}")
    fp_mass = ratio * profile.n_neg
    return fp_mass / (fp_mass + profile.n_pos)


def cost_ratio_from_t(t, profile: DatasetProfile) -> float:
    t = check_fraction(t, "t", low_open=True, high_open=True)
    return t * profile.n_pos / ((1 - t) * profile.n_neg)


@dataclass(frozen=True)
class Line:
    """The line ``a*x + b*y = c``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("line needs a nonzero normal vector")

    def value(self, x, y):
        """Signed residual ``a*x + b*y - c`` (array friendly)."""
        return self.a * np.asarray(x) + self.b * np.asarray(y) - self.c

    @property
    def slope(self) -> float:
        return math.inf if self.b == 0 else -self.a / self.b

    def y_at(self, x) -> float:
        if self.b == 0:
            raise ValueError("vertical line has no unique y")
        return (self.c - self.a * x) / self.b

    def x_at(self, y) -> float:
        if self.a == 0:
            raise ValueError("horizontal line has no unique x")
        return (self.c - self.b * y) / self.a

    def intersect(self, other: "Line"):
        """Intersection point as an ``(x, y)`` tuple, or None when parallel."""
        det = self.a * other.b - other.a * self.b
        if det == 0:
            return None
        x = (self.c * other.b - other.c * self.b) / det
        y = (self.a * other.c - other.a * self.c) / det
        return (x, y)


@dataclass(frozen=True)
class IsoLine(Line):
    """Iso-performance line through ``anchor`` at cost parameter ``t``.

    Stored as ``t*x - (1-t)*y = t*h - (1-t)*k`` so ``t = 1`` gives the vertical
    line ``x = h``.  Points with a nonnegative residual cost at least as much
    as the anchor.
    """

    anchor: RocPoint = field(default=RocPoint(0.0, 0.0))
    t: float = 0.0


def iso_line(point, t) -> IsoLine:
    h, k = as_point(point)
    t = check_fraction(t, "t")
    return IsoLine(t, -(1 - t), t * h - (1 - t) * k, RocPoint(h, k), t)


def slope_to_t(dx, dy):
    """Cost parameter whose iso-lines have slope ``dy/dx``: ``dy / (dx + dy)``."""
    return dy / (dx + dy)


__all__ = [
    "DatasetProfile",
    "RocPoint",
    "RocCurve",
    "HullCurve",
    "Line",
    "IsoLine",
    "build_roc_curve",
    "upper_hull",
    "upper_chain",
    "cost",
    "costs",
    "t_from_cost_ratio",
    "cost_ratio_from_t",
    "iso_line",
    "slope_to_t",
]
