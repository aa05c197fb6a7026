"""Plain-text SVG figures: the feasible region in ROC space and the win heatmap."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .feasible_region import FeasibleRegion
from .geometry import clip_halfplane
from .io import fmt_float
from .selection import INVALID, TIE, HeatmapGrid
from .voros import cheapest_feasible_point

PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#1f78b4")
TIE_COLOR = "#bdbdbd"
INVALID_COLOR = "#ffffff"


def _n(x) -> str:
    # coordinates only need to be readable; values go through fmt_float elsewhere
    return f"{float(x):.3f}".rstrip("0").rstrip(".")


class _Canvas:
    def __init__(self, width, height):
        self.width, self.height = width, height
        self.parts = []

    def add(self, element: str):
        self.parts.append(element)

    def text(self, x, y, s, size=12, anchor="middle", **attrs):
        extra = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.add(
            f'<text x="{_n(x)}" y="{_n(y)}" font-size="{size}" font-family="sans-serif" '
            f'text-anchor="{anchor}"{extra}>{escape(str(s))}</text>'
        )

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        return "\n".join([head, *self.parts, "</svg>"]) + "\n"


def _segment_in_square(a, b, c):
    """Endpoints of ``a*x + b*y = c`` inside the unit square, or None."""
    pts = []
    for x in (0.0, 1.0):
        if b != 0:
            y = (c - a * x) / b
            if -1e-12 <= y <= 1 + 1e-12:
                pts.append((x, min(max(y, 0.0), 1.0)))
    for y in (0.0, 1.0):
        if a != 0:
            x = (c - b * y) / a
            if -1e-12 <= x <= 1 + 1e-12:
                pts.append((min(max(x, 0.0), 1.0), y))
    if len(pts) < 2:
        return None
    pts.sort()
    return pts[0], pts[-1]


def region_svg(region: FeasibleRegion, curves=(), iso_ts=(0.5,), size=420, margin=50) -> str:
    """ROC-space diagram: feasible polygon, bound lines, curves, and iso-lines.

    Iso-lines are drawn through the cheapest feasible point of the first
    curve at each ``t`` in ``iso_ts`` (or through the origin without curves),
    with the lesser part of the region shaded.
    """
    w = size + 2 * margin
    cv = _Canvas(w, w + 20)

    def px(x, y):
        return margin + x * size, margin + (1 - y) * size

    def poly(vertices, **style):
        pts = " ".join(f"{_n(a)},{_n(b)}" for a, b in (px(x, y) for x, y in vertices))
        attrs = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in style.items())
        cv.add(f'<polygon points="{pts}" {attrs}/>')

    def line(p, q, **style):
        (x1, y1), (x2, y2) = px(*p), px(*q)
        attrs = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in style.items())
        cv.add(f'<line x1="{_n(x1)}" y1="{_n(y1)}" x2="{_n(x2)}" y2="{_n(y2)}" {attrs}/>')

    poly([(0, 0), (1, 0), (1, 1), (0, 1)], fill="none", stroke="#000000")
    poly(region.vertices, fill="#f6d365", fill_opacity="0.6", stroke="#b8860b")
    prof, con = region.profile, region.constraints
    if 0 < con.alpha < 1:
        seg = _segment_in_square(con.alpha * prof.n_neg, -(1 - con.alpha) * prof.n_pos, 0.0)
        if seg:
            line(*seg, stroke="#555555", stroke_dasharray="6 4")
    if con.kappa < prof.n_total:
        seg = _segment_in_square(float(prof.n_neg), float(prof.n_pos), con.kappa)
        if seg:
            line(*seg, stroke="#555555", stroke_dasharray="2 3")
    for i, curve in enumerate(curves):
        pts = " ".join(f"{_n(a)},{_n(b)}" for a, b in (px(x, y) for x, y in zip(curve.fpr, curve.tpr)))
        cv.add(f'<polyline points="{pts}" fill="none" stroke="{PALETTE[i % len(PALETTE)]}" stroke-width="1.5"/>')
    for t in iso_ts:
        h, k = cheapest_feasible_point(curves[0], region, t) if curves else (0.0, 0.0)
        a, b, c = t, -(1 - t), t * h - (1 - t) * k
        lesser = clip_halfplane(list(region.vertices), a, b, c)
        if len(lesser) >= 3:
            poly(lesser, fill="#4a90d9", fill_opacity="0.35", stroke="none")
        seg = _segment_in_square(a, b, c)
        if seg:
            line(*seg, stroke="#1f4e8c", stroke_width="1")
        cx, cy = px(h, k)
        cv.add(f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="3" fill="#1f4e8c"/>')
    for v in (0.0, 0.5, 1.0):
        x, y = px(v, 0)
        cv.text(x, y + 16, f"{v:g}", size=11)
        x, y = px(0, v)
        cv.text(x - 8, y + 4, f"{v:g}", size=11, anchor="end")
    cv.text(margin + size / 2, margin + size + 36, "false positive rate")
    cv.text(14, margin + size / 2, "true positive rate", transform=f"rotate(-90 14 {_n(margin + size / 2)})")
    cv.text(
        margin + size / 2,
        margin - 18,
        f"{region.case}  alpha={fmt_float(con.alpha)}  kappa={fmt_float(con.kappa)}  area={region.area:.6g}",
    )
    return cv.render()


def heatmap_svg(grid: HeatmapGrid, cell=28, margin=70) -> str:
    """Winner per (alpha, kappa) cell; ties in grey, invalid cells blank."""
    na, nk = grid.alphas.size, grid.kappas.size
    legend_h = 20 * (len(grid.names) + 2)
    w = margin * 2 + nk * cell
    h = margin * 2 + na * cell + legend_h
    cv = _Canvas(w, h)
    colors = {name: PALETTE[i % len(PALETTE)] for i, name in enumerate(grid.names)}
    colors[TIE] = TIE_COLOR
    colors[INVALID] = INVALID_COLOR
    top = margin
    for i in range(na):
        # highest alpha on top
        y = top + (na - 1 - i) * cell
        for j in range(nk):
            x = margin + j * cell
            win = grid.winners[i][j]
            cv.add(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{colors[win]}" '
                f'stroke="#ffffff"><title>{escape(win)}</title></rect>'
            )
        cv.text(margin - 6, y + cell / 2 + 4, f"{grid.alphas[i]:.3g}", size=10, anchor="end")
    for j in range(nk):
        x = margin + j * cell + cell / 2
        y = top + na * cell + 12
        cv.text(x, y, f"{grid.kappas[j]:.3g}", size=9, transform=f"rotate(45 {_n(x)} {_n(y)})", anchor="start")
    unit = "kappa / |D|" if grid.kappa_is_fraction else "kappa"
    cv.text(margin + nk * cell / 2, top + na * cell + 50, unit)
    cv.text(16, top + na * cell / 2, "alpha", transform=f"rotate(-90 16 {_n(top + na * cell / 2)})")
    cv.text(margin + nk * cell / 2, margin - 20, f"partial VOROS winner (tie if within {grid.epsilon:g})")
    ly = top + na * cell + 70
    for k, label in enumerate([*grid.names, TIE, INVALID]):
        cv.add(f'<rect x="{margin}" y="{ly + 20 * k}" width="14" height="14" fill="{colors[label]}" stroke="#999999"/>')
        cv.text(margin + 20, ly + 20 * k + 11, label, size=11, anchor="start")
    return cv.render()


__all__ = ["region_svg", "heatmap_svg"]
