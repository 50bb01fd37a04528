"""Compare the numba and numpy kernel paths.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]

Each kernel is timed on identical inputs after one warm-up call (which also
absorbs numba's compile time). The max abs difference between the two paths
is printed alongside the timings.
"""

import argparse
import time

import numpy as np

from shortdual import _kernels


def best_of(fn, args, repeat):
    fn(*args)  # warm-up / compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(n, rng):
    x = rng.uniform(-3, 3, n)
    E = rng.uniform(0.1, 2.0, (n, 3, 3))
    grid = np.sin(np.linspace(0, 3, 6001)) + 1.0
    xq = rng.uniform(-0.1, 6.1, n)
    return [
        ("bspline order 4", "bspline", (x, 4)),
        ("bspline order 8", "bspline", (x, 8)),
        ("cramer 3x3 solve", "cramer_dual", (E, 0.8)),
        ("uniform interp", "interp_uniform", (xq, 0.0, 1e-3, grid)),
    ]


def max_diff(a, b):
    if isinstance(a, tuple):
        return max(max_diff(u, v) for u, v in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    ok = np.isfinite(a) & np.isfinite(b)
    return float(np.max(np.abs(a[ok] - b[ok]))) if ok.any() else 0.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy path is available")
        return

    rng = np.random.default_rng(args.seed)
    print(f"n={args.n}, best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}{'max |diff|':>12}")
    for label, name, call in cases(args.n, rng):
        t_np, out_np = best_of(getattr(_kernels, f"{name}_numpy"), call, args.repeat)
        t_nb, out_nb = best_of(getattr(_kernels, f"{name}_numba"), call, args.repeat)
        print(f"{label:<20}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>8.1f}x"
              f"{max_diff(out_np, out_nb):>12.1e}")


if __name__ == "__main__":
    main()
