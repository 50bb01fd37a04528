"""Independent verification of the pointwise duality conditions.

For compactly supported bounded ``g`` and ``h`` the systems over ``g`` and
``h`` are dual frames iff, for almost every ``x`` in ``[-a/2, a/2]``,

    sum_m g(x - l/b + m a) h(x + m a) = b * [l == 0]     for all integers l.

Nothing here calls the synthesis solver; sums are formed directly from the
two functions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DualityNotVerified, ParameterError
from .synthesis import cell_grid


@dataclass
class DualityReport:
    residuals: dict[int, float]
    ell_range: int
    m_range: int
    grid_step: float
    tolerance: float
    passed: bool

    def to_dict(self):
        return {
            "residuals": [{"ell": ell, "residual": r} for ell, r in sorted(self.residuals.items())],
            "pass": self.passed,
            "tolerance": self.tolerance,
            "grid_step": self.grid_step,
            "ell_range": self.ell_range,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class BoundsEstimate:
    bessel_upper_g: float
    bessel_upper_h: float
    lower_frame_g: float
    grid_step: float


def _radius(f):
    return float(f.support_radius)


def residual_grid(a, grid_step, offset=False):
    """x-grid on [-a/2, a/2] shared with the synthesis.

    The default is the synthesis cell-midpoint grid. ``offset=True`` shifts by
    half a cell onto the interior cell edges, which probes interpolation error
    between samples of h; the seams ``±a/2`` themselves are left out.
    """
    xs, s = cell_grid(a, grid_step)
    if offset:
        xs = xs[:-1] + s / 2
    return xs, s


def duality_sums(g, h, a, b, xs, ells, ms):
    """``S[l][k] = sum_{m in ms} g(x_k - l/b + m a) h(x_k + m a)``."""
    xs = np.asarray(xs, dtype=np.float64)
    out = {}
    hv = {m: np.asarray(h(xs + m * a)) for m in ms}
    for ell in ells:
        acc = np.zeros_like(xs)
        for m in ms:
            acc += np.asarray(g(xs - ell * (1.0 / b) + m * a)) * hv[m]
        out[ell] = acc
    return out


def duality_residuals(g, h, a, b, grid_step=None, tolerance=None, offset=False) -> DualityReport:
    """Per-l max deviation of the duality sums from ``b * [l == 0]``.

    ``l`` runs over every integer with ``|l|/b <= R_g + R_h`` and ``m`` over
    every integer whose translate of ``h`` can meet the x-grid, so no
    overlapping term is skipped.
    """
    if not (a > 0 and b > 0):
        raise ParameterError("a and b must be positive")
    if grid_step is None:
        grid_step = a / 2000
    if tolerance is None:
        tolerance = 1e-6 * b
    rg, rh = _radius(g), _radius(h)
    L = int(math.floor(b * (rg + rh) + 1e-12))
    Mm = int(math.ceil((rh + a / 2) / a))
    xs, s = residual_grid(a, grid_step, offset)
    sums = duality_sums(g, h, a, b, xs, range(-L, L + 1), range(-Mm, Mm + 1))
    residuals = {}
    for ell, vals in sums.items():
        target = b if ell == 0 else 0.0
        residuals[ell] = float(np.max(np.abs(vals - target)))
    passed = all(r <= tolerance for r in residuals.values())
    return DualityReport(residuals, L, Mm, s, float(tolerance), passed)


def _period_grid(a, grid_step):
    # cell midpoints of [0, a): an essential sup, blind to jumps at grid nodes
    M = max(int(math.ceil(a / grid_step - 1e-9)), 1)
    return (np.arange(M) + 0.5) * (a / M), a / M


def bessel_upper_bound(w, a, b, grid_step=None) -> float:
    """``(1/b) sum_k sup_x |sum_n w(x - na) w(x - na - k/b)|``.

    The sup is a grid max over one period, so the value is an estimate, not a
    certified bound.
    """
    if not (a > 0 and b > 0):
        raise ParameterError("a and b must be positive")
    if grid_step is None:
        grid_step = a / 2000
    R = _radius(w)
    xs, _ = _period_grid(a, grid_step)
    n_lo = int(math.floor((xs.min() - R) / a)) - 1
    n_hi = int(math.ceil((xs.max() + R) / a)) + 1
    K = int(math.floor(2 * R * b + 1e-12))
    shifted = {n: np.asarray(w(xs - n * a)) for n in range(n_lo, n_hi + 1)}
    total = 0.0
    for k in range(-K, K + 1):
        acc = np.zeros_like(xs)
        for n in range(n_lo, n_hi + 1):
            acc += shifted[n] * np.asarray(w(xs - n * a - k * (1.0 / b)))
        total += float(np.max(np.abs(acc)))
    return total / b


def frame_bounds_from_dual(g, h, a, b, tolerance=None, grid_step=None) -> BoundsEstimate:
    """Bessel estimates for g and h, and the lower frame bound ``1/B_h`` of g."""
    report = duality_residuals(g, h, a, b, grid_step, tolerance)
    if not report.passed:
        worst = max(report.residuals.items(), key=lambda kv: kv[1])
        raise DualityNotVerified(
            f"duality residual {worst[1]:.3e} at l={worst[0]} exceeds tolerance {report.tolerance:.3e}")
    bg = bessel_upper_bound(g, a, b, grid_step)
    bh = bessel_upper_bound(h, a, b, grid_step)
    if grid_step is None:
        grid_step = a / 2000
    return BoundsEstimate(bg, bh, 1.0 / bh, float(grid_step))
