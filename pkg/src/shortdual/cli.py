"""Command-line front end.

Exit codes: 0 success, 2 parameter error, 3 singular G(x), 4 failed
verification. Every error is printed as one line ``ERROR <code>: <detail>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .atlas import ObstructionDB, atlas_svg, frange, scan_region, write_scan_csv
from .duality import duality_residuals
from .errors import ParameterError, ParameterOutOfRange, ShortDualError, SingularMatrix
from .membership import check_axioms, check_cor19, check_prop41
from .synthesis import synthesize_dual
from .windows import GridFunction, make_window, parse_window_spec

EXIT_OK, EXIT_PARAM, EXIT_SINGULAR, EXIT_VERIFY = 0, 2, 3, 4


class _CliExit(Exception):
    def __init__(self, code, detail):
        self.code = code
        self.detail = detail
        super().__init__(detail)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliExit(EXIT_PARAM, message)


def _number(text):
    """Float or exact rational (``p/q``) argument."""
    try:
        if "/" in text:
            return Fraction(text.strip())
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _range(text):
    """``start:stop:step`` (inclusive) or a single value."""
    parts = text.split(":")
    try:
        nums = [Fraction(p.strip()) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if len(nums) == 1:
        v = _number(text)
        return [v], None
    if len(nums) != 3:
        raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {text!r}")
    start, stop, step = nums
    if step <= 0 or stop < start or start <= 0:
        raise argparse.ArgumentTypeError(f"range {text!r} must be positive and ascending")
    return frange(start, stop, step), float(step)


def _positive(v, name):
    if not v > 0:
        raise ParameterError(f"--{name} must be positive")
    return v


def _window(args):
    spec = parse_window_spec(args.window, args.N)
    return make_window(spec)


def _dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check(args):
    w = _window(args)
    if args.method == "axioms":
        if args.a is None:
            raise ParameterError("--a is required for --method axioms")
        rep = check_axioms(w, float(_positive(args.a, "a")), args.grid_step, args.tol)
    elif args.method == "prop41":
        rep = check_prop41(w, args.grid_step, args.tol)
    else:
        rep = check_cor19(w, args.grid_step, args.tol)
    _emit(_dump_json(rep.to_dict()), args.output)
    return EXIT_OK


def cmd_dual(args):
    w = _window(args)
    a = float(_positive(args.a, "a"))
    b = _positive(args.b, "b")
    res = synthesize_dual(w, a, b, args.grid_step, force=args.force)
    rep = duality_residuals(w, res.h, a, float(b), res.grid_step)
    res.residual_summary = rep.to_dict()
    summary = res.summary()
    summary["window"] = w.label
    if args.output:
        prefix = Path(args.output)
        res.h.to_csv(f"{prefix}.dual.csv")
        res.scan.to_csv(f"{prefix}.det.csv")
        summary["files"] = {"dual": f"{prefix.name}.dual.csv", "det": f"{prefix.name}.det.csv"}
        Path(f"{prefix}.json").write_text(_dump_json(summary))
    else:
        sys.stdout.write(_dump_json(summary))
    return EXIT_OK


def cmd_verify(args):
    w = _window(args)
    a = float(_positive(args.a, "a"))
    b = float(_positive(args.b, "b"))
    if args.dual:
        h = GridFunction.from_csv(args.dual)
    else:
        h = synthesize_dual(w, a, b, args.grid_step, force=args.force).h
    rep = duality_residuals(w, h, a, b, args.grid_step, args.tol)
    _emit(_dump_json(rep.to_dict()), args.output)
    if not rep.passed:
        worst = max(rep.residuals.items(), key=lambda kv: kv[1])
        raise _CliExit(EXIT_VERIFY, f"duality residual {worst[1]:.3e} at l={worst[0]} exceeds {rep.tolerance:.3e}")
    return EXIT_OK


def _scan(args):
    w = _window(args)
    a_vals, a_step = args.a
    b_vals, b_step = args.b
    db = ObstructionDB()
    if args.obstructions:
        db.extend_from_csv(args.obstructions)
    pts = scan_region(w, a_vals, b_vals, strict=args.strict, obstructions=db)
    return w, pts, a_step, b_step


def cmd_scan(args):
    _, pts, _, _ = _scan(args)
    if args.output:
        write_scan_csv(pts, args.output)
    else:
        write_scan_csv(pts, sys.stdout)
    return EXIT_OK


def cmd_atlas_plot(args):
    w, pts, a_step, b_step = _scan(args)
    a_step = a_step or w.N / 100
    b_step = b_step or 0.02
    _emit(atlas_svg(pts, w.N, a_step, b_step), args.output)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="shortdual", description="Short-support dual Gabor windows and frame-set atlas.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--window", required=True, help="e.g. bspline:N=2, gauss:N=2, box:c=1, knots:FILE.csv")
        sp.add_argument("--N", type=_number, default=None, help="support length (checked against the window)")
        sp.add_argument("--grid-step", type=float, default=None)
        sp.add_argument("--output", "-o", default=None)

    sp = sub.add_parser("check", help="membership report (JSON)")
    common(sp)
    sp.add_argument("--a", type=_number, default=None)
    sp.add_argument("--method", choices=("axioms", "prop41", "cor19"), default="axioms")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--format", choices=("json",), default="json")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("dual", help="synthesize the short dual (CSV + det scan CSV + JSON)")
    common(sp)
    sp.add_argument("--a", type=_number, required=True)
    sp.add_argument("--b", type=_number, required=True)
    sp.add_argument("--force", action="store_true", help="run outside the theorem's b-range")
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("verify", help="duality residual report (JSON)")
    common(sp)
    sp.add_argument("--a", type=_number, required=True)
    sp.add_argument("--b", type=_number, required=True)
    sp.add_argument("--dual", default=None, help="dual CSV; re-synthesized when omitted")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_verify)

    for name, func, fmt in (("scan", cmd_scan, "csv"), ("atlas-plot", cmd_atlas_plot, "svg")):
        sp = sub.add_parser(name, help=f"region classification ({fmt.upper()})")
        common(sp)
        sp.add_argument("--a", type=_range, required=True, help="start:stop:step or a single value")
        sp.add_argument("--b", type=_range, required=True, help="start:stop:step or a single value (p/q allowed)")
        sp.add_argument("--strict", action="store_true", help="re-verify membership numerically")
        sp.add_argument("--obstructions", default=None, help="extra obstruction CSV (window,a,b,citation)")
        sp.add_argument("--format", choices=(fmt,), default=fmt)
        sp.set_defaults(func=func)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _CliExit as e:
        code, detail = e.code, e.detail
    except ParameterOutOfRange as e:
        code, detail = EXIT_PARAM, f"ParameterOutOfRange: {e}"
    except SingularMatrix as e:
        code, detail = EXIT_SINGULAR, f"SingularMatrix: {e}"
    except (ParameterError, OSError) as e:
        code, detail = EXIT_PARAM, f"{type(e).__name__}: {e}"
    except ShortDualError as e:
        code, detail = EXIT_PARAM, f"{type(e).__name__}: {e}"
    print(f"ERROR {code}: {' '.join(str(detail).split())}", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
