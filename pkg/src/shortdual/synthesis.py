"""Pointwise construction of a dual window supported in [-3a/2, 3a/2].

For ``x`` in ``[-a/2, a/2]`` the three unknowns ``h(x-a), h(x), h(x+a)``
solve ``G(x) v = (0, b, 0)`` with

    G(x)[l+1, m+1] = g(x - l/b + m*a),   l, m in {-1, 0, 1}.

The solve uses the middle-row cofactor expansion (Cramer's rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ParameterError, ParameterOutOfRange, SingularMatrix
from .windows import GridFunction, write_xy_csv

SINGULAR_RTOL = 1e-10

_SHIFTS = np.array([-1.0, 0.0, 1.0])


@dataclass(frozen=True)
class GMatrix:
    x: float
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.float64).reshape(3, 3)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)


def g_entries(w, a, b, xs):
    """Stack of G(x) for every x in ``xs``, shape ``(len(xs), 3, 3)``."""
    xs = np.asarray(xs, dtype=np.float64).ravel()
    ell = _SHIFTS[:, None]
    m = _SHIFTS[None, :]
    # the l/b offsets are formed exactly as 1/b multiples so rows mirror
    args = xs[:, None, None] - ell[None] * (1.0 / b) + m[None] * a
    return np.asarray(w(args.reshape(-1))).reshape(-1, 3, 3)


def build_G(w, a, b, x) -> GMatrix:
    if not (a > 0 and b > 0):
        raise ParameterError("a and b must be positive")
    return GMatrix(float(x), g_entries(w, a, b, [x])[0])


def _as_array(m):
    return m.entries if isinstance(m, GMatrix) else np.asarray(m, dtype=np.float64).reshape(3, 3)


def minors(m):
    """Unsigned minors (G21, G22, G23): delete the middle row and column j."""
    e = _as_array(m)
    g21 = e[0, 1] * e[2, 2] - e[0, 2] * e[2, 1]
    g22 = e[0, 0] * e[2, 2] - e[0, 2] * e[2, 0]
    g23 = e[0, 0] * e[2, 1] - e[0, 1] * e[2, 0]
    return float(g21), float(g22), float(g23)


def det_G(m) -> float:
    """``-g(x-a) G21 + g(x) G22 - g(x+a) G23``."""
    e = _as_array(m)
    g21, g22, g23 = minors(e)
    return float(-e[1, 0] * g21 + e[1, 1] * g22 - e[1, 2] * g23)


# ---------------------------------------------------------------------------
# grids on [-a/2, a/2]
# ---------------------------------------------------------------------------

def node_grid(a, grid_step):
    """Closed grid of [-a/2, a/2] with an even number of cells (0 is a node)."""
    M = max(int(math.ceil(a / grid_step - 1e-9)), 2)
    M += M % 2
    return -a / 2 + (a / M) * np.arange(M + 1), a / M


def cell_grid(a, grid_step):
    """Cell midpoints of [-a/2, a/2] with an odd number of cells (0 is a midpoint).

    No midpoint ever lands on the seams ``±a/2``, where the short dual is
    generally discontinuous.
    """
    M = max(int(math.ceil(a / grid_step - 1e-9)), 1)
    M += 1 - M % 2
    s = a / M
    return -a / 2 + s * (np.arange(M) + 0.5), s


# ---------------------------------------------------------------------------
# determinant scan
# ---------------------------------------------------------------------------

@dataclass
class DetScan:
    """Signed determinant of G(x) on the closed grid of [-a/2, a/2]."""

    x: np.ndarray
    det: np.ndarray
    A_N: np.ndarray
    G21: np.ndarray
    G22: np.ndarray
    G23: np.ndarray
    scale: np.ndarray
    min_abs_det: float
    argmin: float
    step: float

    @property
    def samples(self) -> GridFunction:
        return GridFunction(float(self.x[0]), self.step, self.det)

    def singular_points(self, rtol=SINGULAR_RTOL):
        return np.abs(self.det) <= rtol * self.scale**3

    def to_csv(self, path):
        write_xy_csv(path, self.x, self.det, self.A_N, self.G21, self.G22, self.G23,
                     header=("x", "det", "A_N", "G21", "G22", "G23"))


def det_scan(w, a, b, grid_step=None) -> DetScan:
    """Scan det G(x) on the closed grid of [-a/2, a/2], endpoints included.

    Also returns the minors and the lower-bound column
    ``A_N(x) = (g(x)-g(x-a)) G21 + (g(x)-g(x+a)) G23``.
    """
    if not (a > 0 and b > 0):
        raise ParameterError("a and b must be positive")
    if grid_step is None:
        grid_step = a / 2000
    if not 0 < grid_step <= a / 100 * (1 + 1e-12):
        raise ParameterError(f"grid_step must be in (0, a/100]; got {grid_step!r}")
    xs, step = node_grid(a, grid_step)
    E = g_entries(w, a, b, xs)
    det, g21, g22, g23, _ = _backend.cramer_dual(E, b)
    A_N = (E[:, 1, 1] - E[:, 1, 0]) * g21 + (E[:, 1, 1] - E[:, 1, 2]) * g23
    scale = np.max(np.abs(E), axis=(1, 2))
    k = int(np.argmin(np.abs(det)))
    return DetScan(xs, det, A_N, g21, g22, g23, scale,
                   float(abs(det[k])), float(xs[k]), step)


# ---------------------------------------------------------------------------
# dual synthesis
# ---------------------------------------------------------------------------

@dataclass
class DualResult:
    h: GridFunction
    min_abs_det: float
    det_argmin: float
    grid_step: float
    a: float
    b: float
    seam_jump: float
    solve_residual: float
    in_theorem_range: bool
    scan: DetScan = field(repr=False)
    residual_summary: dict | None = None

    def summary(self):
        out = {
            "a": self.a,
            "b": self.b,
            "grid_step": self.grid_step,
            "min_abs_det": self.min_abs_det,
            "det_argmin": self.det_argmin,
            "seam_jump": self.seam_jump,
            "solve_residual": self.solve_residual,
            "in_theorem_range": self.in_theorem_range,
            "support": [-1.5 * self.a, 1.5 * self.a],
        }
        if self.residual_summary is not None:
            out["residuals"] = self.residual_summary
        return out


def theorem_b_range(N, a):
    """Open-closed b-interval ``(2/(N+a), 4/(N+3a)]`` for the short dual."""
    return 2 / (N + a), 4 / (N + 3 * a)


def check_b_range(N, a, b):
    """Raise ParameterOutOfRange when b lies outside ``(2/(N+a), 4/(N+3a)]``."""
    lo, hi = theorem_b_range(N, a)
    if b <= lo:
        raise ParameterOutOfRange(
            f"b={float(b):.17g} <= 2/(N+a)={float(lo):.17g}: G(x) has a zero row on part of [-a/2, a/2]")
    if b > hi:
        raise ParameterOutOfRange(
            f"b={float(b):.17g} > 4/(N+3a)={float(hi):.17g}: terms with |l| >= 2 no longer vanish")


def synthesize_dual(w, a, b, grid_step=None, force=False, N=None) -> DualResult:
    """Solve G(x) v = (0, b, 0) on a cell grid and assemble h on [-3a/2, 3a/2].

    The grid step is shrunk so ``a`` holds an odd number of cells; the three
    strands ``h(x-a), h(x), h(x+a)`` then interleave into one uniform grid of
    cell midpoints, symmetric about 0.
    """
    if N is None:
        N = w.N
    if not (a > 0 and b > 0):
        raise ParameterError("a and b must be positive")
    if not a < N:
        raise ParameterError(f"a={float(a)!r} must be below N={float(N)!r}")
    if grid_step is None:
        grid_step = a / 2000
    in_range = True
    try:
        check_b_range(N, a, b)
    except ParameterOutOfRange:
        in_range = False
        if not force:
            raise
    a = float(a)
    b = float(b)

    scan = det_scan(w, a, b, grid_step)
    sing = scan.singular_points()
    if sing.any():
        idx = np.flatnonzero(sing)
        k = idx[int(np.argmin(np.abs(scan.det[idx])))]
        raise SingularMatrix(scan.x[k], abs(scan.det[k]), SINGULAR_RTOL * scan.scale[k] ** 3)

    xs, step = cell_grid(a, grid_step)
    E = g_entries(w, a, b, xs)
    det, _, _, _, v = _backend.cramer_dual(E, b)
    rhs = np.array([0.0, b, 0.0])
    resid = float(np.max(np.abs(np.einsum("kij,kj->ki", E, v) - rhs)))

    values = np.concatenate([v[:, 0], v[:, 1], v[:, 2]])
    h = GridFunction(float(xs[0] - a), step, values)

    # the solves at x = -a/2 and x = a/2 both prescribe h(-a/2) and h(a/2)
    ends = g_entries(w, a, b, [-a / 2, a / 2])
    _, _, _, _, ve = _backend.cramer_dual(ends, b)
    jump = float(max(abs(ve[0, 1] - ve[1, 0]), abs(ve[0, 2] - ve[1, 1])))

    return DualResult(
        h=h,
        min_abs_det=scan.min_abs_det,
        det_argmin=scan.argmin,
        grid_step=step,
        a=a,
        b=b,
        seam_jump=jump,
        solve_residual=resid,
        in_theorem_range=in_range,
        scan=scan,
    )
