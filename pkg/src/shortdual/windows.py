"""Window catalog: even, continuous, compactly supported real windows.

Every catalog window is evaluated through ``|x|``, so even symmetry holds
bit-for-bit, and every evaluator returns an exact ``0.0`` at and beyond the
support edge.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _backend
from .errors import ParameterError, WindowSpecError

KINDS = (
    "bspline",
    "cospower",
    "trunc_exp",
    "trunc_rational_abs",
    "trunc_rational_sq",
    "trunc_gauss",
    "box",
    "knot_interpolant",
)

# CLI grammar name -> kind
_GRAMMAR = {
    "bspline": "bspline",
    "cospower": "cospower",
    "exp": "trunc_exp",
    "rational_abs": "trunc_rational_abs",
    "rational_sq": "trunc_rational_sq",
    "gauss": "trunc_gauss",
    "box": "box",
    "knots": "knot_interpolant",
}
_GRAMMAR_INV = {v: k for k, v in _GRAMMAR.items()}


def _is_int(v):
    return float(v).is_integer()


@dataclass(frozen=True)
class WindowSpec:
    """Named window description.

    ``N`` is the support length (support is ``[-N/2, N/2]``); ``box`` uses the
    half-width ``c`` instead. ``knots`` is only used by ``knot_interpolant``
    and lists ``(x, value)`` pairs on the left half-support.
    """

    kind: str
    N: float | None = None
    c: float | None = None
    knots: tuple[tuple[float, float], ...] = ()
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WindowSpecError("kind", f"unknown window kind {self.kind!r}")
        if self.kind == "box":
            if self.c is None or not math.isfinite(self.c) or self.c <= 0:
                raise WindowSpecError("c", "box half-width must be a positive real")
            return
        if self.N is None or not math.isfinite(self.N) or self.N <= 0:
            raise WindowSpecError("N", "support length must be a positive real")
        if self.kind == "bspline" and not _is_int(self.N):
            raise WindowSpecError("N", "B-spline order must be a positive integer")
        if self.kind == "cospower" and (not _is_int(self.N) or self.N < 2):
            raise WindowSpecError("N", "cospower requires an integer N >= 2")
        if self.kind == "knot_interpolant":
            self._validate_knots()

    def _validate_knots(self):
        knots = self.knots
        if len(knots) < 2:
            raise WindowSpecError("knots", "need at least two knots")
        xs = [float(k[0]) for k in knots]
        vs = [float(k[1]) for k in knots]
        half = self.N / 2
        if not all(math.isfinite(v) for v in xs + vs):
            raise WindowSpecError("knots", "knots must be finite")
        if abs(xs[0] + half) > 1e-12 * max(1.0, half):
            raise WindowSpecError("knots", f"first knot must sit at -N/2 = {-half!r}, got {xs[0]!r}")
        if any(x < -half - 1e-12 or x > 1e-12 for x in xs):
            raise WindowSpecError("knots", "knot abscissae must lie in [-N/2, 0]")
        if any(x1 <= x0 for x0, x1 in zip(xs, xs[1:])):
            raise WindowSpecError("knots", "knot abscissae must be strictly ascending")
        if vs[0] != 0.0:
            raise WindowSpecError("knots", "value at -N/2 must be 0")
        if any(v1 <= v0 for v0, v1 in zip(vs, vs[1:])):
            raise WindowSpecError("knots", "knot values must be strictly increasing in x")

    @property
    def support_radius(self) -> float:
        return float(self.c) if self.kind == "box" else float(self.N) / 2

    @property
    def label(self) -> str:
        """Canonical spec string, e.g. ``bspline:N=2``."""
        name = _GRAMMAR_INV[self.kind]
        if self.kind == "box":
            return f"box:c={_fmt_num(self.c)}"
        if self.kind == "knot_interpolant":
            return f"knots:{self.source}" if self.source else f"knots:N={_fmt_num(self.N)}"
        return f"{name}:N={_fmt_num(self.N)}"


def _fmt_num(v):
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


class Window:
    """Immutable evaluator for a :class:`WindowSpec`.

    Calling the window on a scalar returns a float; on an array it returns an
    array of the same shape.
    """

    __slots__ = ("spec", "_f", "_breaks", "_max")

    def __init__(self, spec: WindowSpec):
        self.spec = spec
        self._f, self._breaks = _build(spec)
        self._max = float(self._f(np.zeros(1))[0])

    @property
    def support_radius(self) -> float:
        return self.spec.support_radius

    @property
    def N(self) -> float:
        return 2.0 * self.spec.support_radius

    @property
    def label(self) -> str:
        return self.spec.label

    @property
    def breakpoints(self) -> np.ndarray:
        """Points where the derivative may jump (support edges included)."""
        return self._breaks

    @property
    def max_value(self) -> float:
        return self._max

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        out = self._f(arr.ravel()).reshape(arr.shape)
        if out.ndim == 0:
            return float(out)
        return out

    def __repr__(self):
        return f"Window({self.spec.label})"


def _build(spec):
    """Return (vectorized evaluator on 1-D arrays, breakpoints)."""
    kind = spec.kind
    R = spec.support_radius
    N = 2 * R
    edges = [-R, R]

    if kind == "bspline":
        order = int(round(spec.N))

        def f(x):
            return _backend.bspline(x, order)

        brk = [k - N / 2 for k in range(order + 1)]
        return f, np.array(sorted(set(brk)))

    if kind == "box":
        def f(x):
            return np.where(np.abs(x) <= R, 1.0, 0.0)

        return f, np.array(edges)

    if kind == "knot_interpolant":
        xs = np.array([k[0] for k in spec.knots], dtype=np.float64)
        vs = np.array([k[1] for k in spec.knots], dtype=np.float64)

        def f(x):
            u = np.abs(x)
            return np.where(u < R, np.interp(-u, xs, vs), 0.0)

        brk = np.concatenate([xs, -xs])
        return f, np.unique(brk)

    if kind == "cospower":
        p = 2 * int(round(spec.N)) - 2

        def core(u):
            return np.cos(np.pi * u / N) ** p

        brk = edges
    elif kind == "trunc_exp":
        floor = math.exp(-R)

        def core(u):
            return np.exp(-u) - floor

        brk = edges + [0.0]
    elif kind == "trunc_rational_abs":
        floor = 1.0 / (1.0 + R)

        def core(u):
            return 1.0 / (1.0 + u) - floor

        brk = edges + [0.0]
    elif kind == "trunc_rational_sq":
        floor = 1.0 / (1.0 + R * R)

        def core(u):
            return 1.0 / (1.0 + u * u) - floor

        brk = edges
    elif kind == "trunc_gauss":
        floor = math.exp(-R * R)

        def core(u):
            return np.exp(-u * u) - floor

        brk = edges
    else:  # pragma: no cover - guarded by WindowSpec
        raise WindowSpecError("kind", kind)

    def f(x):
        u = np.abs(x)
        out = np.zeros_like(u)
        inside = u < R
        out[inside] = core(u[inside])
        return out

    return f, np.array(sorted(set(brk)))


def make_window(spec: WindowSpec) -> Window:
    return Window(spec)


def evaluate(w, x):
    """Evaluate a window or grid function; exact zero outside the support."""
    return w(x)


@dataclass(frozen=True)
class GridFunction:
    """Uniformly sampled real function with linear interpolation.

    Evaluates to exactly zero outside ``[x_min, x_max]``.
    """

    x_min: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64).copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if not (math.isfinite(self.x_min) and math.isfinite(self.step)):
            raise ParameterError("grid origin and step must be finite")
        if self.step <= 0:
            raise ParameterError("step must be positive")
        if vals.ndim != 1 or vals.size == 0:
            raise ParameterError("values must be a non-empty 1-D sequence")

    @property
    def x_max(self) -> float:
        return self.x_min + self.step * (self.values.size - 1)

    @property
    def grid(self) -> np.ndarray:
        return self.x_min + self.step * np.arange(self.values.size)

    @property
    def support_radius(self) -> float:
        return max(abs(self.x_min), abs(self.x_max))

    @property
    def max_value(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        out = _backend.interp_uniform(arr.ravel(), self.x_min, self.step, self.values).reshape(arr.shape)
        if out.ndim == 0:
            return float(out)
        return out

    def scaled(self, c) -> GridFunction:
        return GridFunction(self.x_min, self.step, c * self.values)

    def to_csv(self, path) -> None:
        write_xy_csv(path, self.grid, self.values, header=("x", "value"))

    @classmethod
    def from_csv(cls, path) -> GridFunction:
        xs, vs = read_xy_csv(path)
        if xs.size < 2:
            raise ParameterError(f"{path}: need at least two samples")
        steps = np.diff(xs)
        step = (xs[-1] - xs[0]) / (xs.size - 1)
        if np.any(steps <= 0) or np.max(np.abs(steps - step)) > 1e-9 * max(step, 1e-300):
            raise ParameterError(f"{path}: samples must lie on a uniform ascending grid")
        return cls(float(xs[0]), float(step), vs)


def sample(w, x_min, x_max, step) -> GridFunction:
    """Sample ``w`` at ``x_min + k*step``, ``k = 0..floor((x_max-x_min)/step)``."""
    for name, v in (("x_min", x_min), ("x_max", x_max), ("step", step)):
        if not math.isfinite(v):
            raise ParameterError(f"{name} must be finite")
    if step <= 0:
        raise ParameterError("step must be positive")
    if not x_min < x_max:
        raise ParameterError("x_min must be below x_max")
    n = int(math.floor((x_max - x_min) / step + 1e-9)) + 1
    xs = x_min + step * np.arange(n)
    return GridFunction(float(x_min), float(step), w(xs))


# ---------------------------------------------------------------------------
# CSV helpers and the CLI window grammar
# ---------------------------------------------------------------------------

def write_xy_csv(path, *columns, header):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in zip(*columns):
            out.writerow([format(float(v), ".17g") for v in row])


def read_xy_csv(path):
    xs, vs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                x, v = float(Fraction(row[0].strip())), float(Fraction(row[1].strip()))
            except (ValueError, IndexError, ZeroDivisionError):
                if not xs:  # header row
                    continue
                raise ParameterError(f"{path}: malformed row {row!r}") from None
            xs.append(x)
            vs.append(v)
    return np.array(xs), np.array(vs)


def load_knots(path, N=None) -> WindowSpec:
    """Read a knot CSV (``x,value`` rows, ascending x in [-N/2, 0])."""
    xs, vs = read_xy_csv(path)
    if xs.size == 0:
        raise WindowSpecError("knots", f"{path}: no knots")
    inferred = -2.0 * xs[0]
    if N is None:
        N = inferred
    elif abs(float(N) - inferred) > 1e-9 * max(1.0, abs(inferred)):
        raise WindowSpecError("N", f"N={N} disagrees with first knot at {xs[0]} (expected -N/2)")
    return WindowSpec(
        "knot_interpolant",
        N=float(N),
        knots=tuple(zip(xs.tolist(), vs.tolist())),
        source=Path(path).name,
    )


def parse_window_spec(text: str, N=None) -> WindowSpec:
    """Parse the CLI grammar, e.g. ``bspline:N=2``, ``box:c=1``, ``knots:f.csv``."""
    name, sep, rest = text.partition(":")
    name = name.strip()
    if not sep or name not in _GRAMMAR:
        raise WindowSpecError("kind", f"cannot parse window spec {text!r}")
    kind = _GRAMMAR[name]
    if kind == "knot_interpolant":
        return load_knots(rest.strip(), N)
    key, eq, val = rest.partition("=")
    key = key.strip()
    want = "c" if kind == "box" else "N"
    if not eq or key != want:
        raise WindowSpecError(want, f"expected {name}:{want}=<value>, got {text!r}")
    try:
        num = float(Fraction(val.strip()))
    except (ValueError, ZeroDivisionError):
        raise WindowSpecError(want, f"not a number: {val!r}") from None
    if kind == "box":
        return WindowSpec(kind, c=num)
    if N is not None and abs(float(N) - num) > 1e-12 * max(1.0, num):
        raise WindowSpecError("N", f"--N {N} disagrees with window spec N={num}")
    return WindowSpec(kind, N=num)
