"""Membership tests for the window class V_{N,a}.

The class is defined by three axioms on a window ``w`` supported on
``[-N/2, N/2]``:

* A1: ``w`` is even;
* A2: ``w`` is strictly increasing on ``[-N/2, 0]``;
* A3: a nonnegative backward second difference ``Δ²_a w`` on a left interval
  whose extent depends on whether ``a < N/3``.

Two derivative-based sufficient criteria (``check_prop41`` and
``check_cor19``) certify membership for every ``a`` in ``(0, N)`` at once.
All checks are grid scans; a reported pass is numerical evidence, not a proof.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class Witness:
    axiom: str
    x: float
    deficit: float

    def to_dict(self):
        return {"axiom": self.axiom, "x": self.x, "deficit": self.deficit}


@dataclass
class MembershipReport:
    a1_pass: bool
    a2_pass: bool
    a3_pass: bool
    witnesses: list[Witness]
    method: str
    params: dict
    margins: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    universal: bool = False

    @property
    def member(self) -> bool:
        return self.a1_pass and self.a2_pass and self.a3_pass

    def to_dict(self):
        return {
            "member": self.member,
            "method": self.method,
            "axioms": {"A1": self.a1_pass, "A2": self.a2_pass, "A3": self.a3_pass},
            "witnesses": [w.to_dict() for w in self.witnesses],
            "params": dict(self.params),
            "margins": dict(self.margins),
            "notes": list(self.notes),
            "all_a": self.universal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class DifferenceStencil:
    """Backward difference with shift ``a``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError("difference shift a must be positive")

    def first(self, f, x):
        return delta(f, self.a, x)

    def second(self, f, x):
        return delta2(f, self.a, x)


def delta(f, a, x):
    """``f(x) - f(x - a)``."""
    if not a > 0:
        raise ParameterError("a must be positive")
    x = np.asarray(x, dtype=np.float64)
    out = np.asarray(f(x)) - np.asarray(f(x - a))
    return float(out) if out.ndim == 0 else out


def delta2(f, a, x):
    """``f(x) - 2 f(x - a) + f(x - 2a)``."""
    if not a > 0:
        raise ParameterError("a must be positive")
    x = np.asarray(x, dtype=np.float64)
    out = np.asarray(f(x)) - 2.0 * np.asarray(f(x - a)) + np.asarray(f(x - 2.0 * a))
    return float(out) if out.ndim == 0 else out


def a3_point_value(w, N, a):
    """Closed form of ``Δ²_a w`` at ``-N/4 + 3a/4`` for ``a >= N/3``.

    Uses evenness to write it as ``w(N/4 - 3a/4) - 2 w(-N/4 - a/4)``; the
    third term sits left of the support.
    """
    return float(w(N / 4 - 3 * a / 4)) - 2.0 * float(w(-N / 4 - a / 4))


# ---------------------------------------------------------------------------
# grid helpers
# ---------------------------------------------------------------------------

def _grid(lo, hi, step, extra=()):
    n = max(int(math.ceil((hi - lo) / step - 1e-9)), 1)
    xs = np.linspace(lo, hi, n + 1)
    if len(extra):
        e = np.asarray(extra, dtype=np.float64)
        e = e[(e >= lo) & (e <= hi)]
        xs = np.union1d(xs, e)
    return xs


def _runs(mask):
    """Yield (start, stop) index pairs of maximal True runs."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return
    splits = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[splits + 1]])
    stops = np.concatenate([idx[splits], [idx[-1]]]) + 1
    yield from zip(starts.tolist(), stops.tolist())


def _witnesses(axiom, xs, deficit, bad):
    """One witness per contiguous violating run, at its worst point."""
    out = []
    for s, e in _runs(bad):
        k = s + int(np.argmax(deficit[s:e]))
        out.append(Witness(axiom, float(xs[k]), float(deficit[k])))
    return out


def _defaults(w, N, a, grid_step, tol):
    if N is None:
        N = w.N
    if grid_step is None:
        grid_step = min(a, N / 2) / 1000 if a is not None else N / 2000
    if tol is None:
        tol = 1e-10 * _peak(w, N)
    return float(N), float(grid_step), float(tol)


def _peak(w, N):
    xs = np.linspace(-N / 2, N / 2, 2001)
    return float(np.max(np.abs(w(xs))))


def _check_a(N, a, grid_step):
    if not (0 < a < N):
        raise ParameterError(f"shift a={a!r} must satisfy 0 < a < N={N!r}")
    if not grid_step > 0:
        raise ParameterError("grid_step must be positive")
    if grid_step > a / 10 * (1 + 1e-12):
        raise ParameterError(f"grid_step={grid_step!r} too coarse; need grid_step <= a/10 = {a / 10!r}")


def _breaks(w):
    return np.asarray(getattr(w, "breakpoints", ()), dtype=np.float64)


def _scan_symmetry(w, N, step, tol, label):
    xs = _grid(0.0, N / 2, step, np.abs(_breaks(w)))
    dev = np.abs(w(xs) - w(-xs))
    bad = dev > tol
    return not bad.any(), _witnesses(label, xs, dev, bad), float(tol - dev.max())


def _scan_increase(w, N, step, label):
    # the left endpoint is excluded: pairs start at the first interior sample
    xs = _grid(-N / 2, 0.0, step, _breaks(w))[1:]
    vals = w(xs)
    inc = np.diff(vals)
    deficit = -inc
    bad = inc <= 0.0
    return not bad.any(), _witnesses(label, xs[1:], deficit, bad), float(inc.min()) if inc.size else math.inf


def _a3_extra(w, a):
    b = _breaks(w)
    return np.concatenate([b, b + a, b + 2 * a])


def _scan_delta2(w, a, lo, hi, step, tol, label):
    xs = _grid(lo, hi, step, _a3_extra(w, a))
    d2 = delta2(w, a, xs)
    bad = d2 < -tol
    return not bad.any(), _witnesses(label, xs, -d2, bad), float(d2.min())


_A2_NOTE = "A2 strictness scanned from the first interior sample; the left endpoint -N/2 is excluded"


def check_axioms(w, a, grid_step=None, tol=None, N=None) -> MembershipReport:
    """Grid check of A1-A3 for the shift ``a``.

    Inequality failures smaller than ``tol`` count as passes. A2 compares
    consecutive samples and flags any step that is not a strict increase.
    """
    N, grid_step, tol = _defaults(w, N, a, grid_step, tol)
    _check_a(N, a, grid_step)

    a1, wit1, m1 = _scan_symmetry(w, N, grid_step, tol, "A1")
    a2, wit2, m2 = _scan_increase(w, N, grid_step, "A2")
    if a < N / 3:
        a3, wit3, m3 = _scan_delta2(w, a, -N / 2, -N / 4 + 3 * a / 4, grid_step, tol, "A3")
        margins = {"A1": m1, "A2": m2, "A3": m3}
    else:
        a3, wit3, m3 = _scan_delta2(w, a, -N / 2, 0.0, grid_step, tol, "A3")
        pt = -N / 4 + 3 * a / 4
        pv = a3_point_value(w, N, a)
        if pv < -tol:
            a3 = False
            wit3 = wit3 + [Witness("A3", pt, -pv)]
        margins = {"A1": m1, "A2": m2, "A3": min(m3, pv), "A3_point": pv}

    witnesses = sorted(wit1 + wit2 + wit3, key=lambda t: (t.x, t.axiom))
    return MembershipReport(
        a1, a2, a3, witnesses, "axioms",
        params={"N": N, "a": float(a), "grid_step": grid_step, "tol": tol},
        margins=margins,
        notes=[_A2_NOTE],
    )


# ---------------------------------------------------------------------------
# derivative criteria
# ---------------------------------------------------------------------------

def numerical_derivative(w, xs, h, breakpoints=()):
    """Difference quotients of ``w`` at ``xs`` with step ``h``.

    Central by default; one-sided when a breakpoint lies within ``h`` so the
    stencil never straddles a kink (left-sided at the breakpoint itself).
    """
    xs = np.asarray(xs, dtype=np.float64)
    left = (w(xs) - w(xs - h)) / h
    right = (w(xs + h) - w(xs)) / h
    central = (w(xs + h) - w(xs - h)) / (2 * h)
    bp = np.asarray(breakpoints, dtype=np.float64)
    if bp.size == 0:
        return central
    diff = bp[None, :] - xs[:, None]
    ahead = np.any((diff >= 0) & (diff < h), axis=1)
    behind = np.any((diff < 0) & (diff > -h), axis=1)
    out = central.copy()
    out[ahead & ~behind] = left[ahead & ~behind]
    out[behind & ~ahead] = right[behind & ~ahead]
    return out


def _open_grid(lo, hi, step, extra, *, open_lo=True, open_hi=False):
    xs = _grid(lo, hi, step, extra)
    if open_lo:
        xs = xs[xs > lo]
    if open_hi:
        xs = xs[xs < hi]
    return xs


def _prop_defaults(w, N, grid_step, tol):
    if N is None:
        N = w.N
    if grid_step is None:
        grid_step = N / 2000
    if not grid_step > 0:
        raise ParameterError("grid_step must be positive")
    if tol is None:
        tol = 1e-10 * _peak(w, N)
    return float(N), float(grid_step), float(tol)


def _increasing(xs, d, tol_d, label):
    inc = np.diff(d)
    bad = inc < -tol_d
    return not bad.any(), _witnesses(label, xs[1:], -inc, bad), float(inc.min()) if inc.size else math.inf


def check_prop41(w, grid_step=None, tol=None, N=None) -> MembershipReport:
    """Derivative criterion certifying membership for all ``0 < a < N``.

    (a) evenness, (b) strict increase on ``[-N/2, 0]``, (c) ``w'`` increasing
    on ``(-N/2, -N/4]``, (d) ``w'(-x - N/2) <= w'(x)`` for ``x`` in
    ``[-N/4, 0)``. Derivative comparisons use the tolerance ``tol/grid_step``.
    """
    N, h, tol = _prop_defaults(w, N, grid_step, tol)
    tol_d = tol / h
    bp = _breaks(w)

    a_ok, wa, ma = _scan_symmetry(w, N, h, tol, "a")
    b_ok, wb, mb = _scan_increase(w, N, h, "b")

    xc = _open_grid(-N / 2, -N / 4, h, bp)
    dc = numerical_derivative(w, xc, h, bp)
    c_ok, wc, mc = _increasing(xc, dc, tol_d, "c")

    xd = _open_grid(-N / 4, 0.0, h, np.concatenate([bp, -bp - N / 2]), open_lo=False, open_hi=True)
    gap = numerical_derivative(w, xd, h, bp) - numerical_derivative(w, -xd - N / 2, h, bp)
    bad = gap < -tol_d
    d_ok = not bad.any()
    wd = _witnesses("d", xd, -gap, bad)

    witnesses = sorted(wa + wb + wc + wd, key=lambda t: (t.x, t.axiom))
    return MembershipReport(
        a_ok, b_ok, c_ok and d_ok, witnesses, "prop41",
        params={"N": N, "grid_step": h, "tol": tol},
        margins={"a": ma, "b": mb, "c": mc, "d": float(gap.min()) if gap.size else math.inf},
        notes=[_A2_NOTE, "a pass certifies membership for every shift 0 < a < N"],
        universal=a_ok and b_ok and c_ok and d_ok,
    )


def check_cor19(w, grid_step=None, tol=None, N=None) -> MembershipReport:
    """Evenness plus a positive, increasing derivative on ``(-N/2, 0)``."""
    N, h, tol = _prop_defaults(w, N, grid_step, tol)
    tol_d = tol / h
    bp = _breaks(w)

    a_ok, wa, ma = _scan_symmetry(w, N, h, tol, "a")
    xs = _open_grid(-N / 2, 0.0, h, bp, open_hi=True)
    d = numerical_derivative(w, xs, h, bp)
    pos = d > 0.0
    wpos = _witnesses("b_positive", xs, -d, ~pos)
    inc_ok, winc, minc = _increasing(xs, d, tol_d, "b_increasing")
    b_ok = bool(pos.all()) and inc_ok

    witnesses = sorted(wa + wpos + winc, key=lambda t: (t.x, t.axiom))
    # (b) implies strict increase and the second-difference condition
    return MembershipReport(
        a_ok, b_ok, b_ok, witnesses, "cor19",
        params={"N": N, "grid_step": h, "tol": tol},
        margins={"a": ma, "b_positive": float(d.min()), "b_increasing": minc},
        notes=["a pass certifies membership for every shift 0 < a < N"],
        universal=a_ok and b_ok,
    )


def check_lemma45_extension(w, a, grid_step=None, tol=None, N=None):
    """``Δ²_a w >= -tol`` on the whole of ``[-N/2, -N/4 + 3a/4]``.

    Every member of V_{N,a} satisfies this, so it serves as a consistency
    diagnostic. Returns ``(ok, witnesses)``.
    """
    N, grid_step, tol = _defaults(w, N, a, grid_step, tol)
    if not (0 < a < N):
        raise ParameterError(f"shift a={a!r} must satisfy 0 < a < N={N!r}")
    ok, wit, _ = _scan_delta2(w, a, -N / 2, -N / 4 + 3 * a / 4, grid_step, tol, "A3")
    return ok, wit
