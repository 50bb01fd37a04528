"""Classification of (a, b) lattice parameters for a compactly supported window.

Only the known results are used:

* necessary conditions ``ab < 1`` and ``a < N``;
* known obstructions (a small citation database);
* sufficient conditions: the painless region ``b <= 1/N``, the short-dual
  region ``b <= 2/(N+a)``, the half-support region ``N/2 <= a < N``, and the
  V_{N,a} region ``2/(N+a) < b <= 4/(N+3a)``.

Everything else is reported as ``unknown``; nothing here ever claims a point is
not a frame unless it is in the obstruction database.
"""

from __future__ import annotations

import csv
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import IntegrityError, ParameterError
from .membership import check_axioms

FRAME_GUARANTEED = "frame_guaranteed"
KNOWN_NOT_FRAME = "known_not_frame"
NECESSARY_VIOLATED = "necessary_violated"
UNKNOWN = "unknown"

SUFFICIENT_RULES = ("regionA_multiplication", "prop_ii_shortdual", "prop_iii_halfsupport", "thm_D_Vclass")

REGION_A_NOTE = "region A boundary taken as b <= 1/N (painless case); interpretation, not stated as a formula"

_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class GaborParams:
    N: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("N", "a", "b"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, Fraction)) and math.isfinite(float(v)) and v > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {v!r}")

    @classmethod
    def for_window(cls, w, a, b):
        return cls(w.N, a, b)

    def necessary_ok(self) -> bool:
        return self.a * self.b < 1 and self.a < self.N


@dataclass
class RegionClassification:
    status: str
    rules_fired: tuple[str, ...]
    details: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# obstruction database
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Obstruction:
    window: str
    a: float | str  # "any" matches every a
    b: float
    citation: str

    def matches(self, label, a, b) -> bool:
        if label != self.window:
            return False
        if abs(float(b) - float(self.b)) > _MATCH_TOL * max(1.0, abs(float(self.b))):
            return False
        if self.a == "any":
            return True
        return abs(float(a) - float(self.a)) <= _MATCH_TOL * max(1.0, abs(float(self.a)))


DEFAULT_OBSTRUCTIONS = (
    Obstruction("bspline:N=2", "any", 2.0, "known obstruction: B_2 gives no frame for b = 2, any a"),
    Obstruction("bspline:N=2", 2 / 7, 7 / 4, "known obstruction: (a, b) = (2/7, 7/4) is outside the frame set of B_2"),
)


class ObstructionDB:
    def __init__(self, entries=DEFAULT_OBSTRUCTIONS):
        self.entries = list(entries)

    def lookup(self, label, a, b):
        return [e for e in self.entries if e.matches(label, a, b)]

    def extend_from_csv(self, path):
        """Append rows ``window,a,b,citation``; ``a`` may be ``any``."""
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                a = row["a"].strip()
                self.entries.append(Obstruction(
                    row["window"].strip(),
                    "any" if a == "any" else float(Fraction(a)),
                    float(Fraction(row["b"].strip())),
                    row.get("citation", "").strip(),
                ))
        return self


# ---------------------------------------------------------------------------
# window hypotheses
# ---------------------------------------------------------------------------

def region_A_infimum(w, a, grid_step=None) -> float:
    """Grid infimum over [0, a] of ``sum_n |w(x - na)|^2``."""
    if not a > 0:
        raise ParameterError("a must be positive")
    if grid_step is None:
        grid_step = a / 2000
    M = max(int(math.ceil(a / grid_step - 1e-9)), 1)
    xs = np.linspace(0.0, a, M + 1)
    R = w.support_radius
    n_lo = int(math.floor(-R / a)) - 1
    n_hi = int(math.ceil((a + R) / a)) + 1
    acc = np.zeros_like(xs)
    for n in range(n_lo, n_hi + 1):
        acc += np.asarray(w(xs - n * a)) ** 2
    return float(acc.min())


def catalog_certificate(spec, a):
    """True when the window is a proven member of V_{N,a}; None if unproven."""
    kind = spec.kind
    if kind in ("box", "knot_interpolant"):
        return None
    N = float(spec.N)
    if not 0 < a < N:
        return None
    eps = 1e-12 * N
    if kind == "bspline":
        return True if N >= 2 else None
    if kind in ("cospower", "trunc_exp", "trunc_rational_abs"):
        return True
    if a >= 3 * N / 7 - eps:
        return True
    if kind == "trunc_rational_sq" and N >= math.sqrt(12 / 5) and a >= N / 3 - eps:
        return True
    return None


class _Hypotheses:
    """Per-window cache of a-dependent hypothesis checks (thread safe)."""

    def __init__(self, w, strict=False, grid_step=None):
        self.w = w
        self.strict = strict
        self.grid_step = grid_step
        self.floor = 1e-14 * max(w.max_value, 1e-300) ** 2
        self._lock = threading.Lock()
        self._regionA = {}
        self._prop_ii = {}
        self._thm_D = {}
        self._positive = None

    def _memo(self, table, key, fn):
        with self._lock:
            if key in table:
                return table[key]
        val = fn()
        with self._lock:
            table[key] = val
        return val

    def region_A(self, a):
        return self._memo(self._regionA, a, lambda: region_A_infimum(self.w, a, self._step(a)))

    def prop_ii(self, a):
        def run():
            M = 2000
            xs = np.linspace(-a / 2, a / 2, M + 1)
            return float(np.min(np.abs(self.w(xs))))
        return self._memo(self._prop_ii, a, run)

    def positive_inside(self):
        if self._positive is None:
            R = self.w.support_radius
            xs = np.linspace(-R, R, 4001)[1:-1]
            ok = bool(np.all(np.asarray(self.w(xs)) > 0))
            with self._lock:
                self._positive = ok
        return self._positive

    def thm_D(self, a):
        def run():
            if not self.strict:
                cert = catalog_certificate(self.w.spec, a) if hasattr(self.w, "spec") else None
                if cert:
                    return True, "certificate"
            rep = check_axioms(self.w, a)
            return rep.member, "numeric" + ("" if rep.member else " fail: " + ",".join(
                sorted({t.axiom for t in rep.witnesses})))
        return self._memo(self._thm_D, a, run)

    def _step(self, a):
        return self.grid_step if self.grid_step is not None else a / 2000


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def classify(w, p: GaborParams, *, strict=False, obstructions=None, cache=None) -> RegionClassification:
    """Classify one (a, b) point for window ``w``.

    Order: necessary conditions, obstruction lookup, sufficient rules with
    their window hypotheses. All fired rules are reported.
    """
    if abs(float(p.N) - w.N) > 1e-12 * w.N:
        raise ParameterError(f"params N={p.N} does not match the window support length {w.N}")
    hyp = cache if cache is not None else _Hypotheses(w, strict)
    db = obstructions if obstructions is not None else ObstructionDB()
    N, a, b = p.N, p.a, p.b
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        # exact boundary comparisons when a rational was supplied
        N, a, b = Fraction(N), Fraction(a), Fraction(b)
    details = {}

    nec = []
    if not a * b < 1:
        nec.append("nec_ab_lt_1")
    if not a < N:
        nec.append("nec_a_lt_N")

    if nec:
        # the sufficient rules only cover a < N, ab < 1
        return RegionClassification(NECESSARY_VIOLATED, tuple(nec), details)

    hits = db.lookup(w.label, a, b)
    if hits:
        details["obstruction"] = [h.citation for h in hits]

    sufficient = []
    if b <= 1 / N:
        inf_a = hyp.region_A(float(a))
        details["regionA_inf"] = inf_a
        details["regionA_note"] = REGION_A_NOTE
        if inf_a > hyp.floor:
            sufficient.append("regionA_multiplication")
    if a < N and b <= 2 / (N + a):
        inf_g = hyp.prop_ii(float(a))
        details["prop_ii_inf_abs_g"] = inf_g
        if inf_g > hyp.floor:
            sufficient.append("prop_ii_shortdual")
    if N / 2 <= a < N and b < 1 / a:
        pos = hyp.positive_inside()
        details["prop_iii_positive"] = pos
        if pos:
            sufficient.append("prop_iii_halfsupport")
    if a < N and 2 / (N + a) < b <= 4 / (N + 3 * a):
        ok, how = hyp.thm_D(float(a))
        details["thm_D_hypothesis"] = how
        if ok:
            sufficient.append("thm_D_Vclass")

    if hits:
        if sufficient:
            raise IntegrityError(f"obstruction at (a={a}, b={b}) conflicts with {sufficient}")
        return RegionClassification(KNOWN_NOT_FRAME, ("obstruction_db",), details)
    if sufficient:
        return RegionClassification(FRAME_GUARANTEED, tuple(sufficient), details)
    return RegionClassification(UNKNOWN, (), details)


# ---------------------------------------------------------------------------
# region scans
# ---------------------------------------------------------------------------

def frange(start, stop, step):
    """Inclusive arithmetic range ``start, start+step, ..., <= stop``.

    Arguments are converted through their decimal repr so ``0.01`` steps
    land on the nearest floats to ``k/100``.
    """
    fs, fe, fd = (Fraction(str(v)) if isinstance(v, float) else Fraction(v) for v in (start, stop, step))
    if fd <= 0:
        raise ParameterError("step must be positive")
    if fe < fs:
        raise ParameterError("stop must not be below start")
    n = int((fe - fs) / fd)
    return [float(fs + k * fd) for k in range(n + 1)]


@dataclass(frozen=True)
class ScanPoint:
    a: float
    b: float
    classification: RegionClassification


def _threads():
    raw = os.environ.get("GABOR_ATLAS_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"GABOR_ATLAS_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ParameterError("GABOR_ATLAS_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def scan_region(w, a_range, b_range, a_step=None, b_step=None, *, strict=False,
                obstructions=None, threads=None) -> list[ScanPoint]:
    """Classify every lattice point; output is a-major, both ascending.

    ``a_range`` / ``b_range`` are ``(start, stop)`` pairs (inclusive) used
    with the steps, or explicit sequences of values when the step is None.
    """
    a_vals = frange(*a_range, a_step) if a_step is not None else sorted(a_range)
    b_vals = frange(*b_range, b_step) if b_step is not None else sorted(b_range)
    if any(v <= 0 for v in a_vals + b_vals):
        raise ParameterError("scan ranges must lie in (0, inf)")
    hyp = _Hypotheses(w, strict)
    db = obstructions if obstructions is not None else ObstructionDB()
    hyp.positive_inside()

    def row(a):
        return [ScanPoint(a, b, classify(w, GaborParams(w.N, a, b), strict=strict, obstructions=db, cache=hyp))
                for b in b_vals]

    n = threads if threads is not None else _threads()
    if n <= 1 or len(a_vals) == 1:
        rows = [row(a) for a in a_vals]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            rows = list(ex.map(row, a_vals))
    return [pt for r in rows for pt in r]


def write_scan_csv(points, dest):
    """Write ``a,b,status,rules`` rows to a path or an open text file."""
    if hasattr(dest, "write"):
        _write_scan_rows(points, dest)
        return
    with open(dest, "w", newline="") as fh:
        _write_scan_rows(points, fh)


def _write_scan_rows(points, fh):
    out = csv.writer(fh, lineterminator="\n")
    out.writerow(["a", "b", "status", "rules"])
    for pt in points:
        c = pt.classification
        out.writerow([format(float(pt.a), ".17g"), format(float(pt.b), ".17g"), c.status, ";".join(c.rules_fired)])


# ---------------------------------------------------------------------------
# SVG atlas
# ---------------------------------------------------------------------------

_COLORS = {
    "thm_D_Vclass": "#c44e52",
    "prop_iii_halfsupport": "#8172b2",
    "prop_ii_shortdual": "#55a868",
    "regionA_multiplication": "#4c72b0",
    KNOWN_NOT_FRAME: "#000000",
    NECESSARY_VIOLATED: "#d9d9d9",
    UNKNOWN: "#ffffff",
}

_LEGEND = (
    ("regionA_multiplication", "painless, b <= 1/N"),
    ("prop_ii_shortdual", "b <= 2/(N+a), dual on [-a/2, a/2]"),
    ("prop_iii_halfsupport", "N/2 <= a < N, b < 1/a"),
    ("thm_D_Vclass", "2/(N+a) < b <= 4/(N+3a), V_{N,a}"),
    (KNOWN_NOT_FRAME, "known obstruction"),
    (NECESSARY_VIOLATED, "ab >= 1 or a >= N"),
    (UNKNOWN, "unknown"),
)


def _color_key(c: RegionClassification):
    if c.status != FRAME_GUARANTEED:
        return c.status
    for rule in ("thm_D_Vclass", "prop_iii_halfsupport", "prop_ii_shortdual", "regionA_multiplication"):
        if rule in c.rules_fired:
            return rule
    raise IntegrityError("frame_guaranteed without a sufficient rule")


def atlas_svg(points, N, a_step, b_step, b_max=None) -> str:
    """Render a scan as an SVG string: one cell per point plus boundary curves."""
    width, height, left, top, plot_w, plot_h = 760, 520, 60, 20, 460, 460
    if b_max is None:
        b_max = max(pt.b for pt in points) if points else 2.0
    b_max = float(b_max)

    def px(a):
        return left + plot_w * a / N

    def py(b):
        return top + plot_h * (1 - b / b_max)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="#ffffff" stroke="#000000"/>',
        '<g shape-rendering="crispEdges">',
    ]
    cw = plot_w * a_step / N
    ch = plot_h * b_step / b_max
    for pt in points:
        key = _color_key(pt.classification)
        x0 = px(pt.a) - cw / 2
        y0 = py(pt.b) - ch / 2
        out.append(f'<rect x="{x0:.3f}" y="{y0:.3f}" width="{cw:.3f}" height="{ch:.3f}" '
                   f'fill="{_COLORS[key]}"><title>{key}</title></rect>')
    out.append("</g>")

    a_dense = np.linspace(0, N, 401)[1:]
    curves = (
        ("b = 2/(N+a)", 2 / (N + a_dense), "#1b7837"),
        ("b = 4/(N+3a)", 4 / (N + 3 * a_dense), "#b2182b"),
        ("b = 1/N", np.full_like(a_dense, 1 / N), "#2166ac"),
        ("ab = 1", 1 / a_dense, "#000000"),
    )
    for name, bs, color in curves:
        keep = bs <= b_max
        pts = " ".join(f"{px(a):.3f},{py(b):.3f}" for a, b in zip(a_dense[keep], bs[keep]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}">'
                   f'<title>{name}</title></polyline>')

    for k in range(5):
        a = N * k / 4
        b = b_max * k / 4
        out.append(f'<text x="{px(a):.1f}" y="{top + plot_h + 15}" text-anchor="middle">{a:g}</text>')
        out.append(f'<text x="{left - 6}" y="{py(b) + 4:.1f}" text-anchor="end">{b:g}</text>')
    out.append(f'<text x="{left + plot_w / 2}" y="{height - 5}" text-anchor="middle">a</text>')
    out.append(f'<text x="15" y="{top + plot_h / 2}" text-anchor="middle">b</text>')

    lx = left + plot_w + 15
    for i, (key, text) in enumerate(_LEGEND):
        y = top + 10 + 20 * i
        out.append(f'<rect x="{lx}" y="{y}" width="12" height="12" fill="{_COLORS[key]}" stroke="#000000"/>')
        out.append(f'<text x="{lx + 18}" y="{y + 10}">{text}</text>')
    out.append(f'<text x="{lx}" y="{top + 30 + 20 * len(_LEGEND)}" font-size="9">{REGION_A_NOTE[:40]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
