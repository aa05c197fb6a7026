"""Feasible region of ROC space under a minimum precision and a maximum capacity.

Precision at least ``alpha`` keeps points on or above the line through the
origin with slope ``alpha*|N| / ((1-alpha)*|P|)``; capacity ``kappa`` keeps
points with ``|P|*tpr + |N|*fpr <= kappa``.  Intersected with the unit square
these give a convex polygon whose shape falls into a handful of cases.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_count, check_fraction
from .exceptions import AssumptionError, DegenerateRegionError
from .geometry import clip_halfplane, dedupe, shoelace
from .roc_core import RATE_TOL, DatasetProfile, Line, as_point

COUNT_TOL = 1e-9
UNIT_SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


class RegionCase(str, enum.Enum):
    CASE1_TRIANGLE = "Case1Triangle"
    CASE2_QUADRILATERAL = "Case2Quadrilateral"
    CASE3_TRIANGLE = "Case3Triangle"
    CASE3A_PENTAGON = "Case3APentagon"
    CASE3B_TRAPEZOID = "Case3BTrapezoid"
    PRECISION_ONLY = "DegeneratePrecisionOnly"
    CAPACITY_ONLY = "DegenerateCapacityOnly"
    POINT = "DegeneratePoint"
    SEGMENT = "DegenerateSegment"
    # unreachable while (0, 0) counts as feasible; kept so every tag has a name
    EMPTY = "Empty"

    def __str__(self):
        return self.value


MAIN_CASES = (RegionCase.CASE1_TRIANGLE, RegionCase.CASE2_QUADRILATERAL, RegionCase.CASE3_TRIANGLE)
ZERO_AREA_CASES = (RegionCase.POINT, RegionCase.SEGMENT, RegionCase.EMPTY)


@dataclass(frozen=True)
class Constraints:
    """Minimum precision ``alpha`` and maximum count of predicted positives ``kappa``."""

    alpha: float
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_fraction(self.alpha, "alpha"))
        object.__setattr__(self, "kappa", check_count(self.kappa, "kappa"))

    @classmethod
    def from_fraction(cls, alpha, kappa_frac, profile: DatasetProfile) -> "Constraints":
        """Capacity given as a fraction of the dataset size."""
        return cls(alpha, check_fraction(kappa_frac, "kappa_frac") * profile.n_total)


def precision_slope(profile: DatasetProfile, alpha: float) -> float:
    if alpha >= 1:
        return math.inf
    return alpha * profile.n_neg / ((1 - alpha) * profile.n_pos)


def precision_line(profile: DatasetProfile, alpha: float) -> Line:
    """Minimum-precision line ``alpha*|N|*x - (1-alpha)*|P|*y = 0``.

    Feasible points have a nonpositive residual.
    """
    alpha = check_fraction(alpha, "alpha")
    if alpha in (0.0, 1.0):
        raise ValueError(f"alpha={alpha} makes the precision line degenerate; classify the region instead")
    return Line(alpha * profile.n_neg, -(1 - alpha) * profile.n_pos, 0.0)


def capacity_line(profile: DatasetProfile, kappa: float) -> Line:
    """Maximum-capacity line ``|N|*x + |P|*y = kappa``."""
    kappa = check_count(kappa, "kappa")
    return Line(float(profile.n_neg), float(profile.n_pos), kappa)


def never_alarm_t_bound(profile: DatasetProfile, alpha: float) -> float:
    """Largest ``t`` at which the never-alarm point has maximal cost in the region.

    At this value the iso-line through the origin coincides with the
    precision line; above it the line cuts into the region.
    """
    w_neg = alpha * profile.n_neg
    return w_neg / (w_neg + (1 - alpha) * profile.n_pos)


def feasible_mask(fpr, tpr, profile: DatasetProfile, constraints: Constraints):
    """Vectorized feasibility test; the origin always passes."""
    fpr = np.asarray(fpr, dtype=float)
    tpr = np.asarray(tpr, dtype=float)
    alpha = constraints.alpha
    if alpha >= 1:
        prec_ok = fpr <= RATE_TOL
    else:
        prec_ok = tpr >= precision_slope(profile, alpha) * fpr - RATE_TOL
    load = profile.n_pos * tpr + profile.n_neg * fpr
    cap_ok = load <= constraints.kappa + COUNT_TOL
    return prec_ok & cap_ok


def is_feasible(point, profile: DatasetProfile, constraints: Constraints) -> bool:
    h, k = as_point(point)
    return bool(feasible_mask(h, k, profile, constraints))


def practical_violations(profile: DatasetProfile, constraints: Constraints, t_max=None) -> list[str]:
    """Human-readable list of violated practical assumptions (empty when all hold)."""
    out = []
    p = profile.prevalence
    if not profile.n_pos < profile.n_neg:
        out.append(f"negatives must outnumber positives (|P|={profile.n_pos}, |N|={profile.n_neg})")
    if not p < constraints.alpha < 1:
        out.append(f"precision floor must satisfy p < alpha < 1 (p={p:.6g}, alpha={constraints.alpha:.6g})")
    if not 0 < constraints.kappa < profile.n_total:
        out.append(
            f"capacity must satisfy 0 < kappa < |D| (kappa={constraints.kappa:.6g}, |D|={profile.n_total})"
        )
    if t_max is not None and 0 < constraints.alpha < 1:
        bound = never_alarm_t_bound(profile, constraints.alpha)
        if t_max > bound + RATE_TOL:
            out.append(
                f"cost parameter must satisfy t <= alpha|N|/(alpha|N|+(1-alpha)|P|) = {bound:.17g} "
                f"so never alarming stays the costliest feasible point (got t up to {t_max:.17g})"
            )
    return out


def check_practical(profile, constraints, t_max=None):
    problems = practical_violations(profile, constraints, t_max)
    if problems:
        raise AssumptionError("; ".join(problems))


def classify_region(profile: DatasetProfile, constraints: Constraints) -> RegionCase:
    """Shape of the feasible region for every combination of bounds."""
    alpha, kappa = constraints.alpha, constraints.kappa
    n_pos, n_neg = profile.n_pos, profile.n_neg
    if kappa == 0:
        return RegionCase.POINT
    if alpha == 1:
        return RegionCase.SEGMENT
    if alpha == 0:
        # capacity alone; with kappa >= |D| the square itself
        return RegionCase.CAPACITY_ONLY
    if kappa >= profile.n_total:
        return RegionCase.PRECISION_ONLY
    exits_top = alpha * profile.n_total >= n_pos  # alpha >= p
    if exits_top and alpha * kappa >= n_pos:
        return RegionCase.CASE3_TRIANGLE
    if not exits_top and (1 - alpha) * kappa > n_neg:
        return RegionCase.CASE3A_PENTAGON if kappa >= n_pos else RegionCase.CASE3B_TRAPEZOID
    return RegionCase.CASE1_TRIANGLE if kappa < n_pos else RegionCase.CASE2_QUADRILATERAL


def region_vertices(profile: DatasetProfile, constraints: Constraints) -> dict:
    """Named candidate vertices from the closed-form coordinates."""
    a, kap = constraints.alpha, constraints.kappa
    P, N = profile.n_pos, profile.n_neg
    v = {"v00": (0.0, 0.0), "v01": (0.0, 1.0)}
    v["v0k"] = (0.0, kap / P)
    v["vk1"] = ((kap - P) / N, 1.0)
    v["v1k"] = (1.0, (kap - N) / P)
    v["vk0"] = (kap / N, 0.0)
    if 0 < a < 1:
        v["vak"] = ((1 - a) * kap / N, a * kap / P)
        v["va1"] = ((1 - a) * P / (a * N), 1.0)
        v["v1a"] = (1.0, a * N / ((1 - a) * P))
    return v


_CASE_VERTICES = {
    RegionCase.CASE1_TRIANGLE: ("v00", "vak", "v0k"),
    RegionCase.CASE2_QUADRILATERAL: ("v00", "vak", "vk1", "v01"),
    RegionCase.CASE3_TRIANGLE: ("v00", "va1", "v01"),
    RegionCase.CASE3A_PENTAGON: ("v00", "v1a", "v1k", "vk1", "v01"),
    RegionCase.CASE3B_TRAPEZOID: ("v00", "v1a", "v1k", "v0k"),
}


def half_plane_polygon(profile: DatasetProfile, constraints: Constraints) -> list:
    """Unit square clipped by both bounds, counterclockwise from the origin."""
    poly = list(UNIT_SQUARE)
    alpha, kappa = constraints.alpha, constraints.kappa
    if alpha > 0:
        # (1-alpha)|P| y - alpha |N| x >= 0
        poly = clip_halfplane(poly, -alpha * profile.n_neg, (1 - alpha) * profile.n_pos, 0.0)
    if kappa < profile.n_total:
        poly = clip_halfplane(poly, -float(profile.n_neg), -float(profile.n_pos), -kappa)
    return _start_at_origin(dedupe(poly))


def _start_at_origin(poly):
    for i, (x, y) in enumerate(poly):
        if abs(x) <= 1e-12 and abs(y) <= 1e-12:
            return poly[i:] + poly[:i]
    return poly


@dataclass(frozen=True, eq=False)
class FeasibleRegion:
    """Convex feasible polygon with its case tag and area."""

    case: RegionCase
    vertices: tuple
    area: float
    profile: DatasetProfile
    constraints: Constraints

    @property
    def t_bound(self) -> float:
        return never_alarm_t_bound(self.profile, self.constraints.alpha)

    @property
    def precision_slope(self) -> float:
        return precision_slope(self.profile, self.constraints.alpha)

    def named_vertices(self) -> dict:
        return region_vertices(self.profile, self.constraints)

    def contains(self, fpr, tpr):
        return feasible_mask(fpr, tpr, self.profile, self.constraints)

    def is_main_case(self) -> bool:
        return self.case in MAIN_CASES


def region_polygon(profile: DatasetProfile, constraints: Constraints) -> FeasibleRegion:
    """Feasible polygon from the case-specific vertex lists.

    Single-bound regions come from clipping the unit square, which is also
    how every other case can be cross-checked.
    """
    case = classify_region(profile, constraints)
    if case in ZERO_AREA_CASES:
        raise DegenerateRegionError(case)
    if case in _CASE_VERTICES:
        named = region_vertices(profile, constraints)
        verts = dedupe([named[k] for k in _CASE_VERTICES[case]])
    else:
        verts = half_plane_polygon(profile, constraints)
    area = shoelace(verts)
    if area <= 0:
        raise DegenerateRegionError(case)
    return FeasibleRegion(case, tuple(verts), area, profile, constraints)


def unconstrained_region(profile: DatasetProfile | None = None) -> FeasibleRegion:
    """The whole unit square as a region (no precision floor, no capacity limit)."""
    profile = profile or DatasetProfile(1, 1)
    return region_polygon(profile, Constraints(0.0, profile.n_total))


def region_area_closed_form(profile: DatasetProfile, constraints: Constraints) -> float:
    """Closed-form area for the three main cases.

    The third case is the triangle (0,0), ((1-alpha)|P|/(alpha|N|), 1), (0,1),
    whose area is half its base along y = 1.
    """
    case = classify_region(profile, constraints)
    a, kap = constraints.alpha, constraints.kappa
    P, N = profile.n_pos, profile.n_neg
    if case is RegionCase.CASE1_TRIANGLE:
        return (1 - a) * kap**2 / (2 * N * P)
    if case is RegionCase.CASE2_QUADRILATERAL:
        return (2 * kap * P - a * kap**2 - P**2) / (2 * N * P)
    if case is RegionCase.CASE3_TRIANGLE:
        return (1 - a) * P / (2 * a * N)
    raise ValueError(f"no closed-form area for region case {case}")
