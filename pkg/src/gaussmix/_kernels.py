"""Compiled planar hull kernels used in the Monte-Carlo inner loops.

Everything here works on separate x / y coordinate arrays so that rows of a
``(batch, 2, n)`` path array can be passed without copying.
"""

import numpy as np
from numba import njit

HULL_EPS = 1e-9


@njit(cache=True, inline="always")
def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


@njit(cache=True)
def _octagon_candidates(x, y):
    # Akl-Toussaint: drop points strictly inside the polygon spanned by the
    # extreme points in 8 directions. Keeps everything if that polygon is
    # degenerate.
    n = x.shape[0]
    ext = np.zeros(8, np.int64)
    b0 = b1 = b2 = b3 = b4 = b5 = b6 = b7 = -np.inf
    for i in range(n):
        a = x[i]
        b = y[i]
        if a > b0:
            b0 = a
            ext[0] = i
        if a + b > b1:
            b1 = a + b
            ext[1] = i
        if b > b2:
            b2 = b
            ext[2] = i
        if b - a > b3:
            b3 = b - a
            ext[3] = i
        if -a > b4:
            b4 = -a
            ext[4] = i
        if -a - b > b5:
            b5 = -a - b
            ext[5] = i
        if -b > b6:
            b6 = -b
            ext[6] = i
        if a - b > b7:
            b7 = a - b
            ext[7] = i
    nx = np.empty(8)
    ny = np.empty(8)
    c = np.empty(8)
    m = 0
    for j in range(8):
        p = ext[j]
        q = ext[(j + 1) % 8]
        if p == q:
            continue
        nx[m] = -(y[q] - y[p])
        ny[m] = x[q] - x[p]
        c[m] = nx[m] * x[p] + ny[m] * y[p]
        m += 1
    if m < 3:
        return np.arange(n)
    keep = np.empty(n, np.int64)
    k = 0
    for i in range(n):
        for j in range(m):
            if nx[j] * x[i] + ny[j] * y[i] - c[j] <= 0.0:
                keep[k] = i
                k += 1
                break
    return keep[:k]


@njit(cache=True)
def hull_indices(x, y, eps):
    """Indices of the extreme points of ``{(x_i, y_i)}`` in counterclockwise
    order, starting from the lexicographically smallest point.

    Collinear and duplicate points are dropped. The orientation threshold is
    ``eps * extent**2``. A fully degenerate input returns one or two indices.
    """
    n = x.shape[0]
    if n > 64:
        cand = _octagon_candidates(x, y)
    else:
        cand = np.arange(n)
    xs = x[cand]
    ys = y[cand]
    o1 = np.argsort(ys, kind="mergesort")
    o2 = np.argsort(xs[o1], kind="mergesort")
    order = cand[o1[o2]]
    m = order.shape[0]
    extent = max(xs.max() - xs.min(), ys.max() - ys.min())
    tol = eps * extent * extent
    h = np.empty(2 * m + 1, np.int64)
    k = 0
    for ii in range(m):
        i = order[ii]
        while k >= 2 and _orient(x[h[k - 2]], y[h[k - 2]], x[h[k - 1]], y[h[k - 1]], x[i], y[i]) <= tol:
            k -= 1
        h[k] = i
        k += 1
    lower = k + 1
    for ii in range(m - 2, -1, -1):
        i = order[ii]
        while k >= lower and _orient(x[h[k - 2]], y[h[k - 2]], x[h[k - 1]], y[h[k - 1]], x[i], y[i]) <= tol:
            k -= 1
        h[k] = i
        k += 1
    if k <= 2:
        # all points coincide within tolerance
        return h[:1].copy()
    return h[: k - 1].copy()


@njit(cache=True)
def polygon_area(x, y, idx):
    """Shoelace area of the polygon ``idx`` (counterclockwise)."""
    m = idx.shape[0]
    if m < 3:
        return 0.0
    # fan from the first vertex: sum of signed triangle areas
    x0 = x[idx[0]]
    y0 = y[idx[0]]
    s = 0.0
    for j in range(1, m - 1):
        s += _orient(x0, y0, x[idx[j]], y[idx[j]], x[idx[j + 1]], y[idx[j + 1]])
    return 0.5 * s


@njit(cache=True)
def hull_area(x, y, eps):
    return polygon_area(x, y, hull_indices(x, y, eps))


@njit(cache=True)
def _sum_area(xa, ya, ia, xb, yb, ib, eps):
    na = ia.shape[0]
    nb = ib.shape[0]
    sx = np.empty(na * nb)
    sy = np.empty(na * nb)
    for i in range(na):
        for j in range(nb):
            sx[i * nb + j] = xa[ia[i]] + xb[ib[j]]
            sy[i * nb + j] = ya[ia[i]] + yb[ib[j]]
    return hull_area(sx, sy, eps)


@njit(cache=True)
def mixed_area(xa, ya, xb, yb, eps):
    """Planar mixed area of two hulls by polarization:
    ``(A(K+L) - A(K) - A(L)) / 2``. Returns ``(mixed, A(K), A(L))``."""
    ia = hull_indices(xa, ya, eps)
    ib = hull_indices(xb, yb, eps)
    a = polygon_area(xa, ya, ia)
    b = polygon_area(xb, yb, ib)
    s = _sum_area(xa, ya, ia, xb, yb, ib, eps)
    return 0.5 * (s - a - b), a, b


@njit(cache=True)
def batch_hull_area(pts, eps):
    """Hull areas of a ``(batch, 2, n)`` stack of planar point sets."""
    nb = pts.shape[0]
    out = np.empty(nb)
    for b in range(nb):
        out[b] = hull_area(pts[b, 0], pts[b, 1], eps)
    return out


@njit(cache=True)
def batch_mixed_area(p, q, eps):
    """Row-wise mixed areas of two ``(batch, 2, n)`` stacks.

    Returns ``(mixed, area_p, area_q)`` arrays.
    """
    nb = p.shape[0]
    mixed = np.empty(nb)
    ap = np.empty(nb)
    aq = np.empty(nb)
    for b in range(nb):
        mixed[b], ap[b], aq[b] = mixed_area(p[b, 0], p[b, 1], q[b, 0], q[b, 1], eps)
    return mixed, ap, aq
