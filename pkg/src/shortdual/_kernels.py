"""Hot numeric kernels.

Each kernel exists twice: a pure numpy version (``*_numpy``) and, when numba
is importable, an ``@njit`` loop version (``*_numba``). ``shortdual._backend``
picks one set at import time.
"""

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# centered cardinal B-spline, two-term recurrence
# ---------------------------------------------------------------------------

def bspline_numpy(x, order):
    """Evaluate the centered B-spline of the given order at ``x`` (1-D array).

    Level ``k`` of the recurrence needs B_k at the ``order-k+1`` points
    ``u + (order-k)/2 - i``; each level is built from the previous one, so
    the cost is O(order**2) per point.
    """
    u = np.abs(np.asarray(x, dtype=np.float64))
    n = order
    offs = (n - 1) / 2.0 - np.arange(n, dtype=np.float64)
    t = u[:, None] + offs[None, :]
    vals = ((t >= -0.5) & (t < 0.5)).astype(np.float64)
    for k in range(2, n + 1):
        offs = (n - k) / 2.0 - np.arange(n - k + 1, dtype=np.float64)
        t = u[:, None] + offs[None, :]
        vals = ((t + k / 2.0) * vals[:, :-1] + (k / 2.0 - t) * vals[:, 1:]) / (k - 1)
    out = vals[:, 0]
    out[u >= n / 2.0] = 0.0
    return out


def cramer_dual_numpy(E, b):
    """Solve ``E[i] @ v = (0, b, 0)`` for a stack of 3x3 matrices.

    Returns ``(det, g21, g22, g23, v)``. The determinant is expanded along the
    middle row with unsigned minors, and the solution is read off the middle
    column of the adjugate.
    """
    E = np.asarray(E, dtype=np.float64)
    g21 = E[:, 0, 1] * E[:, 2, 2] - E[:, 0, 2] * E[:, 2, 1]
    g22 = E[:, 0, 0] * E[:, 2, 2] - E[:, 0, 2] * E[:, 2, 0]
    g23 = E[:, 0, 0] * E[:, 2, 1] - E[:, 0, 1] * E[:, 2, 0]
    det = -E[:, 1, 0] * g21 + E[:, 1, 1] * g22 - E[:, 1, 2] * g23
    v = np.empty((E.shape[0], 3))
    with np.errstate(divide="ignore", invalid="ignore"):
        v[:, 0] = -b * g21 / det
        v[:, 1] = b * g22 / det
        v[:, 2] = -b * g23 / det
    v[det == 0.0] = np.nan
    return det, g21, g22, g23, v


def interp_uniform_numpy(xq, x0, step, values):
    """Linear interpolation on a uniform grid, exactly zero off the grid.

    Query points within 1e-9 cells of a node snap to that node, so nodes
    reproduce their sample exactly.
    """
    xq = np.asarray(xq, dtype=np.float64)
    n = values.shape[0]
    u = (xq - x0) / step
    r = np.rint(u)
    u = np.where(np.abs(u - r) <= 1e-9, r, u)
    inside = (u >= 0.0) & (u <= n - 1)
    out = np.zeros_like(u)
    if n == 1:
        out[inside] = values[0]
        return out
    ui = u[inside]
    i = np.minimum(np.floor(ui).astype(np.int64), n - 2)
    t = ui - i
    out[inside] = (1.0 - t) * values[i] + t * values[i + 1]
    return out


# ---------------------------------------------------------------------------
# numba twins
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=False)
    def bspline_numba(x, order):
        n = order
        m = x.shape[0]
        out = np.empty(m)
        vals = np.empty(n)
        for j in range(m):
            u = abs(x[j])
            if u >= n / 2.0:
                out[j] = 0.0
                continue
            for i in range(n):
                t = u + (n - 1) / 2.0 - i
                vals[i] = 1.0 if (t >= -0.5 and t < 0.5) else 0.0
            for k in range(2, n + 1):
                for i in range(n - k + 1):
                    t = u + (n - k) / 2.0 - i
                    vals[i] = ((t + k / 2.0) * vals[i] + (k / 2.0 - t) * vals[i + 1]) / (k - 1)
            out[j] = vals[0]
        return out

    @numba.njit(cache=False)
    def cramer_dual_numba(E, b):
        m = E.shape[0]
        det = np.empty(m)
        g21 = np.empty(m)
        g22 = np.empty(m)
        g23 = np.empty(m)
        v = np.empty((m, 3))
        for j in range(m):
            a11 = E[j, 0, 0]
            a12 = E[j, 0, 1]
            a13 = E[j, 0, 2]
            a31 = E[j, 2, 0]
            a32 = E[j, 2, 1]
            a33 = E[j, 2, 2]
            m21 = a12 * a33 - a13 * a32
            m22 = a11 * a33 - a13 * a31
            m23 = a11 * a32 - a12 * a31
            d = -E[j, 1, 0] * m21 + E[j, 1, 1] * m22 - E[j, 1, 2] * m23
            g21[j] = m21
            g22[j] = m22
            g23[j] = m23
            det[j] = d
            if d == 0.0:
                v[j, 0] = np.nan
                v[j, 1] = np.nan
                v[j, 2] = np.nan
            else:
                v[j, 0] = -b * m21 / d
                v[j, 1] = b * m22 / d
                v[j, 2] = -b * m23 / d
        return det, g21, g22, g23, v

    @numba.njit(cache=False)
    def interp_uniform_numba(xq, x0, step, values):
        n = values.shape[0]
        m = xq.shape[0]
        out = np.zeros(m)
        for j in range(m):
            u = (xq[j] - x0) / step
            r = np.rint(u)
            if abs(u - r) <= 1e-9:
                u = r
            if u < 0.0 or u > n - 1:
                continue
            if n == 1:
                out[j] = values[0]
                continue
            i = int(np.floor(u))
            if i > n - 2:
                i = n - 2
            t = u - i
            out[j] = (1.0 - t) * values[i] + t * values[i + 1]
        return out

else:  # pragma: no cover
    bspline_numba = None
    cramer_dual_numba = None
    interp_uniform_numba = None
