"""Small convex-polygon toolkit: shoelace area and half-plane clipping."""

import numpy as np

DEDUP_TOL = 1e-12


def shoelace(vertices) -> float:
    """Signed area of a polygon (positive when counterclockwise)."""
    if len(vertices) < 3:
        return 0.0
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return float(0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def dedupe(vertices, tol=DEDUP_TOL):
    """Drop consecutive (cyclically) repeated vertices."""
    out = []
    for p in vertices:
        p = (float(p[0]), float(p[1]))
        if out and abs(out[-1][0] - p[0]) <= tol and abs(out[-1][1] - p[1]) <= tol:
            continue
        out.append(p)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= tol and abs(out[0][1] - out[-1][1]) <= tol:
        out.pop()
    return out


def clip_halfplane(vertices, a, b, c):
    """One Sutherland-Hodgman step: keep the part of a convex polygon with ``a*x + b*y >= c``."""
    n = len(vertices)
    if n == 0:
        return []
    out = []
    f = [a * x + b * y - c for x, y in vertices]
    for i in range(n):
        j = (i + 1) % n
        p, q = vertices[i], vertices[j]
        fp, fq = f[i], f[j]
        if fp >= 0:
            out.append((p[0], p[1]))
        if (fp >= 0) != (fq >= 0):
            r = fp / (fp - fq)
            out.append((p[0] + r * (q[0] - p[0]), p[1] + r * (q[1] - p[1])))
    return dedupe(out)


def clipped_areas(vertices, a, b, c):
    """Areas of ``polygon ∩ {a*x + b*y >= c}`` for many half-planes at once.

    ``vertices`` is a counterclockwise convex polygon; ``a``, ``b``, ``c`` are
    broadcastable arrays.  Integrates ``x dy - y dx`` over the kept boundary
    pieces plus the closing chord along the cutting line.
    """
    v = np.asarray(vertices, dtype=float)
    a, b, c = np.broadcast_arrays(*(np.atleast_1d(np.asarray(z, dtype=float)) for z in (a, b, c)))
    if v.shape[0] < 3:
        return np.zeros(a.shape)
    px, py = v[:, 0], v[:, 1]
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    f = a[..., None] * px + b[..., None] * py - c[..., None]
    g = np.roll(f, -1, axis=-1)
    inp, inq = f >= 0, g >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(inp != inq, f / (f - g), 0.0)
    ix = px + r * (qx - px)
    iy = py + r * (qy - py)
    sx = np.where(inp, px, ix)
    sy = np.where(inp, py, iy)
    ex = np.where(inq, qx, ix)
    ey = np.where(inq, qy, iy)
    keep = inp | inq
    twice = np.sum(np.where(keep, sx * ey - sy * ex, 0.0), axis=-1)
    leaving = inp & ~inq
    entering = ~inp & inq
    has_cut = leaving.any(axis=-1) & entering.any(axis=-1)
    lx = np.sum(np.where(leaving, ix, 0.0), axis=-1)
    ly = np.sum(np.where(leaving, iy, 0.0), axis=-1)
    nx = np.sum(np.where(entering, ix, 0.0), axis=-1)
    ny = np.sum(np.where(entering, iy, 0.0), axis=-1)
    twice = twice + np.where(has_cut, lx * ny - ly * nx, 0.0)
    return np.maximum(0.5 * twice, 0.0)
