"""Partial area of lesser classifiers.

For a feasible operating point ``(h, k)`` and cost parameter ``t`` the lesser
classifiers are the feasible points with higher cost, i.e. the part of the
region on the far side of the iso-performance line through ``(h, k)``.

While ``t`` stays at or below the never-alarm bound the origin is the costliest
vertex and the best vertex sits on the y-axis, so the iso-line enters through
the y-axis and leaves through one of the other edges.  That yields four
polygon shapes, picked by comparing the point's cost with the costs of the
region's corner vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateRegionError, InfeasiblePointError
from .feasible_region import FeasibleRegion, RegionCase
from .geometry import clip_halfplane, clipped_areas, dedupe, shoelace
from .roc_core import RATE_TOL, Line, as_point, costs, iso_line
from ._validation import check_fraction

# relative width of the cost band treated as "on" a vertex
COST_TOL = 1e-12


class PolygonCase(str, enum.Enum):
    TRIANGLE_ALPHA_T = "Triangle_alpha_t"
    QUAD_ALPHA_KAPPA_T = "Quad_alpha_kappa_t"
    PENTAGON = "Pentagon"
    QUAD_ALPHA1_T = "Quad_alpha1_t"
    EMPTY_BELOW = "EmptyBelow"
    FULL_REGION = "FullRegion"
    # t above the never-alarm bound or an off-regime region: plain clipping
    CLIPPED = "Clipped"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RationalLinearForm:
    """``x(t) = a + b / (c*t + d)``."""

    a: float
    b: float
    c: float
    d: float

    def __call__(self, t):
        return self.a + self.b / (self.c * np.asarray(t, dtype=float) + self.d)

    def pole(self) -> float | None:
        return None if self.c == 0 else -self.d / self.c


@dataclass(frozen=True)
class PartialAreaResult:
    area: float
    normalized: float
    polygon_case: PolygonCase
    vertices: tuple


def rational_linear_coeffs(point, region: FeasibleRegion, which: str) -> RationalLinearForm:
    """x-coordinate of the iso-line's crossing with a region bound, as a function of t.

    ``which="alpha_t"`` gives the crossing with the precision line,
    ``which="kappa_t"`` the crossing with the capacity line.
    """
    h, k = as_point(point)
    P, N = region.profile.n_pos, region.profile.n_neg
    alpha, kappa = region.constraints.alpha, region.constraints.kappa
    if which == "alpha_t":
        if not 0 < alpha < 1:
            raise ValueError("the precision crossing needs 0 < alpha < 1")
        c1 = alpha * N + (1 - alpha) * P
        d1 = alpha * N
        a1 = (1 - alpha) * P * (h + k) / c1
        b1 = (1 - alpha) * P * (k - (h + k) * alpha * N / c1)
        # a1 - b1 / (c1 t - d1)
        return RationalLinearForm(a1, -b1, c1, -d1)
    if which == "kappa_t":
        if P == N:
            raise ValueError("equal class counts: the capacity crossing is linear in t, use a direct intersection")
        c2 = P - N
        a2 = (P * (h + k) - kappa) / c2
        b2 = kappa - k * P - N * a2
        return RationalLinearForm(a2, b2, c2, float(N))
    raise ValueError(f"which must be 'alpha_t' or 'kappa_t', got {which!r}")


def _iso_slope(t):
    return t / (1 - t)


def _y_on_iso(h, k, t, x):
    return _iso_slope(t) * (x - h) + k


def _x_alpha_t(h, k, t, region):
    """Crossing of the iso-line with the precision line (x-coordinate)."""
    form = rational_linear_coeffs((h, k), region, "alpha_t")
    den = form.c * t + form.d
    if np.all(np.abs(den) > 1e-12 * abs(form.d)):
        return form(t)
    m = region.precision_slope
    s = _iso_slope(t)
    return (k - s * h) / (m - s)


def _x_kappa_t(h, k, t, region):
    P, N = region.profile.n_pos, region.profile.n_neg
    kappa = region.constraints.kappa
    if P != N:
        return rational_linear_coeffs((h, k), region, "kappa_t")(t)
    return (kappa - P * k + t * (P * (h + k) - kappa)) / (N + t * (P - N))


def _v0t(h, k, t):
    return (0.0, k - _iso_slope(t) * h)


def _vt1(h, k, t):
    return ((1 - t) * (1 - k) / t + h, 1.0)


def _corner_costs(region: FeasibleRegion, t):
    named = region.named_vertices()
    return {key: costs(x, y, t) for key, (x, y) in named.items()}


def _check_inputs(point, t, region):
    if region.case not in (
        RegionCase.CASE1_TRIANGLE,
        RegionCase.CASE2_QUADRILATERAL,
        RegionCase.CASE3_TRIANGLE,
    ):
        raise DegenerateRegionError(region.case, f"lesser-classifier polygons need a main-case region, got {region.case}")
    h, k = as_point(point)
    t = check_fraction(t, "t")
    if not region.contains(h, k):
        raise InfeasiblePointError(f"point ({h}, {k}) is outside the feasible region")
    return h, k, t


def lesser_vertices(point, t, region: FeasibleRegion) -> PartialAreaResult:
    """Polygon of lesser classifiers for ``point`` at cost parameter ``t``."""
    h, k, t = _check_inputs(point, t, region)
    c0 = t * h + (1 - t) * (1 - k)
    if t > region.t_bound:
        return _clipped_result(h, k, t, region)
    cc = _corner_costs(region, t)
    named = region.named_vertices()
    top = "v0k" if region.case is RegionCase.CASE1_TRIANGLE else "v01"
    if c0 >= cc["v00"] - COST_TOL:
        return PartialAreaResult(0.0, 0.0, PolygonCase.EMPTY_BELOW, ())
    if c0 <= cc[top] + COST_TOL:
        return PartialAreaResult(region.area, 1.0, PolygonCase.FULL_REGION, region.vertices)

    v00 = (0.0, 0.0)
    v0t = _v0t(h, k, t)
    if region.case is RegionCase.CASE3_TRIANGLE:
        knee = "va1"
    else:
        knee = "vak"
    if c0 >= cc[knee]:
        x = float(_x_alpha_t(h, k, t, region))
        verts = [v00, (x, region.precision_slope * x), v0t]
        case = PolygonCase.TRIANGLE_ALPHA_T
    elif region.case is RegionCase.CASE3_TRIANGLE:
        verts = [v00, named["va1"], _vt1(h, k, t), v0t]
        case = PolygonCase.QUAD_ALPHA1_T
    elif region.case is RegionCase.CASE1_TRIANGLE or c0 >= cc["vk1"]:
        x = float(_x_kappa_t(h, k, t, region))
        verts = [v00, named["vak"], (x, float(_y_on_iso(h, k, t, x))), v0t]
        case = PolygonCase.QUAD_ALPHA_KAPPA_T
    else:
        verts = [v00, named["vak"], named["vk1"], _vt1(h, k, t), v0t]
        case = PolygonCase.PENTAGON
    verts = tuple(dedupe(verts))
    area = shoelace(verts)
    return PartialAreaResult(area, area / region.area, case, verts)


def _clipped_result(h, k, t, region):
    line = iso_line((h, k), t)
    verts = tuple(clip_halfplane(list(region.vertices), line.a, line.b, line.c))
    area = max(shoelace(verts), 0.0)
    if area == 0:
        case = PolygonCase.EMPTY_BELOW
    elif abs(area - region.area) <= 1e-15:
        case = PolygonCase.FULL_REGION
    else:
        case = PolygonCase.CLIPPED
    return PartialAreaResult(area, area / region.area, case, verts)


def partial_area(point, t, region: FeasibleRegion) -> PartialAreaResult:
    """Lesser-classifier area for any region with positive area.

    Main-case regions use the vertex construction; the remaining shapes
    (alpha below prevalence, single-bound regions) are clipped directly.
    """
    if region.is_main_case():
        return lesser_vertices(point, t, region)
    h, k = as_point(point)
    t = check_fraction(t, "t")
    if not region.contains(h, k):
        raise InfeasiblePointError(f"point ({h}, {k}) is outside the feasible region")
    return _clipped_result(h, k, t, region)


def lesser_areas(point, t, region: FeasibleRegion) -> np.ndarray:
    """Vectorized lesser-classifier area of one point over an array of ``t``.

    Feasibility of ``point`` is the caller's responsibility.
    """
    h, k = float(point[0]), float(point[1])
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    if not region.is_main_case():
        return _clip_many(h, k, t, region)
    above = t > region.t_bound
    if above.any():
        out[above] = _clip_many(h, k, t[above], region)
    sel = ~above
    if sel.any():
        out[sel] = _case_areas(h, k, t[sel], region)
    return out


def _clip_many(h, k, t, region):
    a = t
    b = -(1 - t)
    c = t * h - (1 - t) * k
    return clipped_areas(region.vertices, a, b, c)


def _tri_area(x1, y1, x2, y2, x3, y3):
    return 0.5 * ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))


def _poly_area(xs, ys):
    """Shoelace over a list of coordinate arrays (same shape)."""
    n = len(xs)
    tot = 0.0
    for i in range(n):
        j = (i + 1) % n
        tot = tot + xs[i] * ys[j] - xs[j] * ys[i]
    return 0.5 * tot


def _case_areas(h, k, t, region):
    c0 = costs(h, k, t)
    cc = _corner_costs(region, t)
    named = region.named_vertices()
    top = "v0k" if region.case is RegionCase.CASE1_TRIANGLE else "v01"
    empty = c0 >= cc["v00"] - COST_TOL
    full = ~empty & (c0 <= cc[top] + COST_TOL)
    rest = ~(empty | full)
    area = np.where(full, region.area, 0.0)
    if not rest.any():
        return area
    tr = t[rest]
    c0r = c0[rest]
    with np.errstate(divide="ignore", invalid="ignore"):
        y0t = k - _iso_slope(tr) * h
        knee = "va1" if region.case is RegionCase.CASE3_TRIANGLE else "vak"
        tri = c0r >= cc[knee][rest]
        res = np.zeros_like(tr)
        if tri.any():
            xa = _x_alpha_t(h, k, tr[tri], region)
            res[tri] = _tri_area(0.0, 0.0, xa, region.precision_slope * xa, 0.0, y0t[tri])
        other = ~tri
        if other.any():
            xt1 = (1 - tr) * (1 - k) / tr + h
            if region.case is RegionCase.CASE3_TRIANGLE:
                vx, vy = named["va1"]
                res[other] = _poly_area(
                    [0.0, vx, xt1[other], 0.0], [0.0, vy, 1.0, y0t[other]]
                )
            else:
                ax, ay = named["vak"]
                if region.case is RegionCase.CASE1_TRIANGLE:
                    quad = other
                else:
                    quad = other & (c0r >= cc["vk1"][rest])
                if quad.any():
                    xk = _x_kappa_t(h, k, tr[quad], region)
                    yk = _y_on_iso(h, k, tr[quad], xk)
                    res[quad] = _poly_area([0.0, ax, xk, 0.0], [0.0, ay, yk, y0t[quad]])
                pent = other & ~quad
                if pent.any():
                    kx, ky = named["vk1"]
                    res[pent] = _poly_area(
                        [0.0, ax, kx, xt1[pent], 0.0], [0.0, ay, ky, 1.0, y0t[pent]]
                    )
    area[rest] = res
    return area


def clip_area_oracle(region: FeasibleRegion, line: Line, keep_below: bool = True) -> float:
    """Area of the region on one side of ``line`` by a single clipping step.

    "Below" is the side reached by decreasing y; for a vertical line it is the
    side reached by increasing x (the higher-cost side of a ``t = 1`` iso-line).
    """
    a, b, c = line.a, line.b, line.c
    probe = -b if b != 0 else a  # residual change when moving "below"
    sign = 1.0 if probe > 0 else -1.0
    if not keep_below:
        sign = -sign
    verts = clip_halfplane(list(region.vertices), sign * a, sign * b, sign * c)
    return max(shoelace(verts), 0.0)


__all__ = [
    "PolygonCase",
    "RationalLinearForm",
    "PartialAreaResult",
    "rational_linear_coeffs",
    "lesser_vertices",
    "partial_area",
    "lesser_areas",
    "clip_area_oracle",
]
