import random
from fractions import Fraction

import pytest
from mpmath import mp
import mpmath

from k3reg.mpnum import (
    GammaKernel,
    NonSquarefreeError,
    PrecisionContext,
    bloch_wigner,
    bloch_wigner_integral,
    complex_roots,
    find_integer_relation,
    gamma_factor_value,
    g_kernel,
    hnf,
    lll_reduce,
    mat_mul,
    recognize_algebraic,
    right_kernel,
    snf,
)

CTX = PrecisionContext(50, 12)
D5_POLY = [1, 1, -2, -1, 10, -18, 20, -18, 12, -5, 1]


# ----------------------------------------------------------- roots

def test_roots_quadratic():
    rd = complex_roots([1, 0, 1], CTX)  # x^2 + 1
    assert rd.signature == (0, 1)
    with CTX.workprec():
        vals = sorted([mp.im(r) for r in rd.roots])
        assert abs(vals[0] + 1) < CTX.eps and abs(vals[1] - 1) < CTX.eps


def test_roots_d5_polynomial():
    rd = complex_roots(D5_POLY, CTX)
    assert rd.signature == (0, 5)
    with CTX.workprec():
        target = mp.mpc("1.367", "0.197")
        assert min(abs(r - target) for r in rd.roots) < 1e-2


def test_roots_quartic_signature():
    rd = complex_roots([-1, 1, 0, 0, 1], CTX)  # x^4 + x - 1
    assert rd.signature == (2, 1)
    with CTX.workprec():
        target = mp.mpc("0.2481", "1.0340")
        assert min(abs(r - target) for r in rd.roots) < 1e-2


def test_roots_newton_sums():
    rng = random.Random(7)
    for _ in range(5):
        coeffs = [rng.randint(-9, 9) for _ in range(6)] + [1]
        if not coeffs[0]:
            coeffs[0] = 1
        try:
            rd = complex_roots(coeffs, CTX)
        except NonSquarefreeError:
            continue
        with CTX.workprec():
            s = sum(rd.roots)
            p = mp.mpf(1)
            for r in rd.roots:
                p *= r
            n = len(coeffs) - 1
            assert abs(s + Fraction(coeffs[n - 1], coeffs[n])) < 1e-40
            assert abs(p - (-1) ** n * Fraction(coeffs[0], coeffs[n])) < 1e-40


def test_roots_rejects_nonsquarefree():
    with pytest.raises(NonSquarefreeError):
        complex_roots([1, 2, 1], CTX)  # (x+1)^2


def test_roots_conjugate_pairing():
    rd = complex_roots(D5_POLY, CTX)
    with CTX.workprec():
        for i, j in enumerate(rd.conjugate_index):
            assert abs(mp.conj(rd.roots[i]) - rd.roots[j]) < CTX.eps


# ----------------------------------------------------------- Bloch-Wigner

def test_bw_vanishes_on_reals():
    with CTX.workprec():
        for x in ["-3.5", "0.25", "1", "17"]:
            assert bloch_wigner(mp.mpf(x), CTX) == 0


def test_bw_catalan():
    # z = i: log|i| = 0 so D(i) = Im Li2(i); Im(i^n)/n^2 is the alternating
    # series over odd n
    with CTX.workprec():
        oracle = mp.nsum(lambda k: (-1) ** k / (2 * k + 1) ** 2, [0, mp.inf])
        assert abs(bloch_wigner(mp.mpc(0, 1), CTX) - oracle) < CTX.eps
        assert abs(bloch_wigner(mp.mpc(0, 1), CTX) - mp.catalan) < CTX.eps


def test_bw_five_term_fixed_point():
    with CTX.workprec():
        x = mp.mpc(1, 1) / 2
        y = mp.mpc(1, -1) / 3
        s = (bloch_wigner(x, CTX) + bloch_wigner(y, CTX)
             + bloch_wigner((1 - x) / (1 - x * y), CTX)
             + bloch_wigner(1 - x * y, CTX)
             + bloch_wigner((1 - y) / (1 - x * y), CTX))
        assert abs(s) < CTX.eps


def test_bw_symmetries_random():
    rng = random.Random(11)
    ctx = PrecisionContext(30, 10)
    with ctx.workprec():
        for _ in range(10 ** 4):
            z = mp.mpc(rng.uniform(-3, 3), rng.uniform(0.01, 3))
            d = bloch_wigner(z, ctx)
            assert abs(bloch_wigner(mp.conj(z), ctx) + d) < 1e-28
            assert abs(bloch_wigner(1 / z, ctx) + d) < 1e-28


def test_bw_five_term_random():
    rng = random.Random(13)
    ctx = PrecisionContext(40, 12)
    with ctx.workprec():
        for _ in range(25):
            x = mp.mpc(rng.uniform(-2, 2), rng.uniform(0.05, 2))
            y = mp.mpc(rng.uniform(-2, 2), rng.uniform(0.05, 2))
            if abs(1 - x * y) < 0.05:
                continue
            s = (bloch_wigner(x, ctx) + bloch_wigner(y, ctx)
                 + bloch_wigner((1 - x) / (1 - x * y), ctx)
                 + bloch_wigner(1 - x * y, ctx)
                 + bloch_wigner((1 - y) / (1 - x * y), ctx))
            assert abs(s) < 1e-36


def test_bw_agrees_with_path_integral():
    # validates the closed form against the defining differential form
    rng = random.Random(17)
    ctx = PrecisionContext(30, 10)
    with ctx.workprec():
        for _ in range(20):
            z = mp.mpc(rng.uniform(-1.5, 2.5), rng.uniform(0.1, 2))
            a = bloch_wigner(z, ctx)
            b = bloch_wigner_integral(z, ctx)
            assert abs(a - b) < 1e-20


# ----------------------------------------------------------- Gamma kernels

def test_g_kernel_incomplete_gamma_identity():
    with CTX.workprec():
        t = mp.mpf("0.8")
        v = g_kernel(1, t, (0, 1), 0, CTX)
        assert abs(v - mp.e ** (-2 * mp.pi * t) / mp.pi) < CTX.eps


def test_g_kernel_large_t_asymptotic():
    with CTX.workprec():
        t = mp.mpf(40)
        s = mp.mpf(2)
        v = g_kernel(s, t, (0, 1), 0, CTX)
        asym = 2 * (2 * mp.pi) ** (-s) * mp.e ** (-2 * mp.pi * t) * (2 * mp.pi * t) ** (s - 1)
        assert abs(v / asym - 1) < 0.01


def _mellin_barnes_oracle(s, t, shifts, dps=60):
    with mp.workdps(dps):
        s = mp.mpc(s)
        t = mp.mpf(t)
        c = mp.mpf(6) + abs(mp.re(s))

        def f(y):
            z = mp.mpc(c, y)
            return gamma_factor_value(tuple(shifts), z + s) * t ** (-z) / z

        return mp.quad(f, [-mp.inf, 0, mp.inf], maxdegree=9) / (2 * mp.pi)


@pytest.mark.parametrize("shifts,s,t", [
    ((0, 0, 1), 2, "1.0"),
    ((0, 0, 1), -1, "0.7"),
    ((0, 1, 1), -1, "1.3"),
])
def test_g_kernel_vs_contour_integration(shifts, s, t):
    ctx = PrecisionContext(30, 10)
    with ctx.workprec():
        v = GammaKernel(shifts, ctx).value(s, mp.mpf(t), 0)
        o = _mellin_barnes_oracle(s, t, shifts)
        assert abs(v - o) < 1e-28


def test_g_kernel_series_matches_closed_form_at_pole():
    K = GammaKernel((0, 1), CTX)
    with CTX.workprec():
        for t in ["0.4", "2.5"]:
            tt = mp.mpf(t)
            assert abs(K._series(mp.mpc(-1), tt, 0) - K._closed_form(mp.mpc(-1), tt)) < CTX.eps
            assert abs(K._series(mp.mpc(2), tt, 0) - K._closed_form(mp.mpc(2), tt)) < CTX.eps


def test_g_kernel_derivative_matches_finite_difference():
    K = GammaKernel((0, 0, 1), CTX)
    with CTX.workprec():
        t = mp.mpf("1.1")
        h = mp.mpf(10) ** -20
        d1 = K.value(2, t, 1)
        fd = (K.value(2 + h, t) - K.value(2 - h, t)) / (2 * h)
        assert abs(d1 - fd) < 1e-38


# ----------------------------------------------------------- lattices

def test_snf_diagonal_fixed():
    U, D, V = snf([[2, 0], [0, 4]])
    assert D == [[2, 0], [0, 4]]
    assert mat_mul(mat_mul(U, [[2, 0], [0, 4]]), V) == D


def test_snf_2_3():
    A = [[2, 0], [0, 3]]
    U, D, V = snf(A)
    assert D == [[1, 0], [0, 6]]
    assert mat_mul(mat_mul(U, A), V) == D


def test_hnf_rank_deficient():
    A = [[1, 2], [2, 4], [3, 5]]
    H, U = hnf(A)
    assert mat_mul(U, A) == H
    assert all(v == 0 for v in H[2])
    ker = right_kernel([[1, 2, 3], [2, 4, 5]])  # transpose has kernel dim 1
    assert len(ker) == 1


def test_snf_hnf_random_exact():
    rng = random.Random(23)
    for _ in range(20):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        A = [[rng.randint(-9, 9) for _ in range(m)] for _ in range(n)]
        U, D, V = snf(A)
        assert mat_mul(mat_mul(U, A), V) == D
        divs = [D[i][i] for i in range(min(n, m)) if D[i][i] != 0]
        for a, b in zip(divs, divs[1:]):
            assert b % a == 0
        for i in range(min(n, m)):
            for j in range(min(n, m)):
                if i != j:
                    assert D[i][j] == 0 if j < len(D[i]) else True
        H, W = hnf(A)
        assert mat_mul(W, A) == H


def test_right_kernel_annihilates():
    rng = random.Random(29)
    for _ in range(20):
        n, m = rng.randint(1, 4), rng.randint(2, 6)
        A = [[rng.randint(-6, 6) for _ in range(m)] for _ in range(n)]
        for v in right_kernel(A):
            assert all(sum(A[i][j] * v[j] for j in range(m)) == 0 for i in range(n))


def test_lll_preserves_lattice_and_shortens():
    rng = random.Random(31)
    for _ in range(10):
        n = rng.randint(2, 5)
        B = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        U, D, V = snf(B)
        if any(D[i][i] == 0 for i in range(n)):
            continue
        R = lll_reduce(B)
        # same lattice: HNFs agree
        assert hnf(B)[0] == hnf(R)[0]
        assert max(sum(x * x for x in R[0]) for _ in [0]) <= max(sum(x * x for x in row) for row in B)


def test_integer_relation_planted():
    with CTX.workprec():
        v1 = mp.sqrt(2)
        v2 = mp.sqrt(3)
        v3 = 3 * v1 - 7 * v2
        rel = find_integer_relation([v1, v2, v3], CTX)
    assert rel is not None
    a, b, c = rel
    assert (a, b) == (3 * -c, -7 * -c) or (a, b) == (-3 * c, 7 * c) or (a, b, c) in [(3, -7, -1), (-3, 7, 1)]


def test_recognize_sqrt5():
    with CTX.workprec():
        r5 = mp.sqrt(5)
        out = recognize_algebraic(r5, [mp.mpf(1), r5], CTX)
        assert out is not None and out[0] == [Fraction(0), Fraction(1)]
        out = recognize_algebraic(-2 - r5, [mp.mpf(1), r5], CTX)
        assert out is not None and out[0] == [Fraction(-2), Fraction(-1)]


def test_recognize_pi_returns_none():
    with CTX.workprec():
        out = recognize_algebraic(mp.pi, [mp.mpf(1), mp.sqrt(5)], CTX, height_bound=10 ** 6)
    assert out is None


def test_recognize_stable_under_doubling():
    for ctx in [CTX, CTX.double()]:
        with ctx.workprec():
            val = (4 - 2 * mp.sqrt(5)) * 576
            out = recognize_algebraic(val, [mp.mpf(1), mp.sqrt(5)], ctx)
            assert out is not None
            assert out[0] == [Fraction(2304), Fraction(-1152)]
