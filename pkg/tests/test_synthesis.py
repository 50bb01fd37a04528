import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import catalog
from oracles import det3, duality_sum_bruteforce
from shortdual import (
    GridFunction,
    ParameterError,
    ParameterOutOfRange,
    SingularMatrix,
    build_G,
    det_G,
    det_scan,
    duality_residuals,
    minors,
    synthesize_dual,
)
from shortdual.synthesis import cell_grid, node_grid, theorem_b_range

J = np.fliplr(np.eye(3))
MEMBERS = [("bspline", 2), ("bspline", 3), ("trunc_exp", 2), ("cospower", 3), ("trunc_rational_abs", 2)]


def in_range_point(N, a, t):
    lo, hi = theorem_b_range(N, a)
    return lo + t * (hi - lo)


# -- the 3x3 matrix ---------------------------------------------------------

def test_knot_counterexample_matrix(knot_window):
    G = build_G(knot_window, 1.0, 3 / 7, 0.0)
    assert np.allclose(G.entries, [[5, 3, 0], [10, 12, 10], [0, 3, 5]], atol=1e-12, rtol=0)
    assert abs(det_G(G)) <= 1e-12 * 12**3
    assert minors(G) == pytest.approx((15.0, 25.0, 15.0))


def test_knot_counterexample_singular(knot_window):
    with pytest.raises(SingularMatrix) as e:
        synthesize_dual(knot_window, 1.0, 3 / 7)
    assert abs(e.value.x) < 1e-9


def test_bspline_frozen_matrix(b2):
    # a = 1/2, b = 1 at x = 0: rows are g(x - l + m/2)
    G = build_G(b2, 0.5, 1.0, 0.0)
    assert np.allclose(G.entries, [[0.5, 0, 0], [0.5, 1, 0.5], [0, 0, 0.5]])
    G = build_G(b2, 0.5, 1.0, -0.25)
    assert np.allclose(G.entries, [[0.75, 0.25, 0], [0.25, 0.75, 0.75], [0, 0, 0.25]])
    assert det_G(G) == pytest.approx(0.125, abs=1e-15)
    assert det_G(G) == pytest.approx(det3(G.entries), abs=1e-15)


@given(t=st.floats(0.01, 1.0), af=st.sampled_from([0.1, 0.25, 0.5, 0.75, 0.9]), x=st.floats(-0.5, 0.5),
       member=st.sampled_from(MEMBERS))
@settings(max_examples=150, deadline=None)
def test_det_and_symmetry(t, af, x, member):
    kind, N = member
    w = catalog(kind, N)
    a = af * N
    b = in_range_point(N, a, t)
    G = build_G(w, a, b, x * a)
    Gm = build_G(w, a, b, -x * a)
    assert det_G(G) == pytest.approx(det3(G.entries), rel=1e-10, abs=1e-14)
    assert np.allclose(Gm.entries, J @ G.entries @ J, rtol=1e-12, atol=1e-15)
    assert det_G(Gm) == pytest.approx(det_G(G), rel=1e-9, abs=1e-14)


@given(t=st.floats(0.01, 1.0), af=st.sampled_from([0.1, 0.25, 0.5, 0.75, 0.9]), member=st.sampled_from(MEMBERS))
@settings(max_examples=40, deadline=None)
def test_minor_inequalities(t, af, member):
    kind, N = member
    w = catalog(kind, N)
    a = af * N
    b = in_range_point(N, a, t)
    sc = det_scan(w, a, b, a / 400)
    left = sc.x <= 0
    assert np.all(sc.G21[left] >= -1e-12)
    assert np.all(sc.G23[left] >= -1e-12)
    assert np.all(sc.G22[left] >= sc.G21[left] + sc.G23[left] - 1e-10)
    assert np.all(sc.det[left] >= sc.A_N[left] - 1e-10)
    assert np.all(sc.A_N[left] >= -1e-10)
    assert sc.min_abs_det > 0


# -- grids and scans --------------------------------------------------------

def test_grids():
    xs, s = node_grid(1.0, 0.1)
    assert xs[0] == -0.5 and xs[-1] == 0.5 and len(xs) % 2 == 1 and 0.0 in xs
    xs, s = cell_grid(1.0, 0.1)
    assert len(xs) % 2 == 1 and abs(xs[len(xs) // 2]) < 1e-15
    assert xs[0] > -0.5 and xs[-1] < 0.5 and s <= 0.1


def test_det_scan_frozen(b2):
    sc = det_scan(b2, 0.5, 1.0)
    assert sc.min_abs_det == pytest.approx(0.125)
    assert abs(sc.argmin) == pytest.approx(0.25)
    assert sc.x[0] == -0.25 and sc.x[-1] == 0.25


def test_det_scan_rejects_coarse_grid(b2):
    with pytest.raises(ParameterError):
        det_scan(b2, 0.5, 1.0, grid_step=0.1)


def test_det_scan_csv(tmp_path, b2):
    sc = det_scan(b2, 1.0, 0.5)
    p = tmp_path / "d.csv"
    sc.to_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "x,det,A_N,G21,G22,G23" and len(lines) == sc.x.size + 1


# -- synthesis --------------------------------------------------------------

def test_b2_dual_frozen(b2):
    res = synthesize_dual(b2, 0.5, 1.0)
    assert res.h(0.0) == pytest.approx(1.0, abs=1e-12)
    assert res.h.x_min >= -0.75 - 1e-12 and res.h.x_max <= 0.75 + 1e-12
    assert res.solve_residual < 1e-12
    assert res.in_theorem_range
    assert res.min_abs_det == pytest.approx(0.125)


@pytest.mark.parametrize("kind,N", MEMBERS)
@pytest.mark.parametrize("af", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("t", [0.3, 1.0])
def test_dual_properties(kind, N, af, t):
    w = catalog(kind, N)
    a = af * N
    b = in_range_point(N, a, t)
    res = synthesize_dual(w, a, b)
    h = res.h
    assert h.x_min >= -1.5 * a - 1e-12 and h.x_max <= 1.5 * a + 1e-12
    assert np.allclose(h.values, h.values[::-1], atol=1e-8)
    rep = duality_residuals(w, h, a, b, res.grid_step)
    assert rep.passed, rep.residuals


@pytest.mark.parametrize("x", [-0.31, -0.05, 0.0, 0.17, 0.33])
@pytest.mark.parametrize("ell", [-2, -1, 0, 1, 2])
def test_duality_sums_bruteforce(b2, x, ell):
    a, b = 0.7, 0.8
    res = synthesize_dual(b2, a, b)
    target = b if ell == 0 else 0.0
    assert duality_sum_bruteforce(b2, res.h, a, b, x, ell) == pytest.approx(target, abs=1e-6 * b)


def test_duality_sums_are_periodic(b2):
    # the sums are a-periodic, so [-a/2, a/2] carries everything
    a, b = 0.7, 0.8
    h = synthesize_dual(b2, a, b).h
    for x in [-0.3, 0.1, 0.2]:
        for ell in (-1, 0, 1):
            s0 = duality_sum_bruteforce(b2, h, a, b, x, ell)
            for k in (-2, 1, 3):
                assert duality_sum_bruteforce(b2, h, a, b, x + k * a, ell) == pytest.approx(s0, abs=1e-9)


@given(c=st.floats(0.1, 20))
@settings(max_examples=15, deadline=None)
def test_scaling_covariance(c):
    b2 = catalog("bspline", 2)
    a, b = 0.5, 0.9
    h = synthesize_dual(b2, a, b).h
    scaled = GridFunction(-1.0, 0.001, c * b2(np.linspace(-1, 1, 2001)))
    hc = synthesize_dual(_WithN(scaled, 2.0), a, b).h
    assert np.allclose(hc.values * c, h.values, rtol=1e-6, atol=1e-9)


class _WithN:
    def __init__(self, f, N):
        self.f, self.N = f, N

    def __call__(self, x):
        return self.f(x)


def test_remark_case_is_degenerate(b2):
    a, b = 0.5, 0.7
    assert b <= 2 / (2 + a)
    sc = det_scan(b2, a, b)
    assert sc.min_abs_det <= 1e-9 * float(np.max(sc.scale)) ** 3
    with pytest.raises(ParameterOutOfRange):
        synthesize_dual(b2, a, b)
    with pytest.raises(SingularMatrix):
        synthesize_dual(b2, a, b, force=True)


def test_upper_b_bound(b2):
    a = 0.5
    _, hi = theorem_b_range(2, a)
    synthesize_dual(b2, a, hi)
    with pytest.raises(ParameterOutOfRange):
        synthesize_dual(b2, a, hi * 1.01)
    res = synthesize_dual(b2, a, hi * 1.01, force=True)
    assert not res.in_theorem_range


@pytest.mark.parametrize("a,b", [(0.0, 1.0), (-1, 1), (1, 0), (2.0, 0.5), (3.0, 0.5)])
def test_bad_parameters(b2, a, b):
    with pytest.raises(ParameterError):
        synthesize_dual(b2, a, b)
