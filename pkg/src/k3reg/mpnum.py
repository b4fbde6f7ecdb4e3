"""Multiprecision numerics: polynomial roots, the Bloch-Wigner function D,
inverse-Mellin Gamma kernels for L-series, and exact integer lattice tools.

Everything here is a pure function of (inputs, PrecisionContext).  No caller
may rely on the ambient mpmath precision: every public entry point scopes its
own working precision and restores the previous state on exit.
"""

from __future__ import annotations

import math as _math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath import mp


class PrecisionError(ArithmeticError):
    """Requested result cannot be certified at the context precision."""


class NonSquarefreeError(ValueError):
    """Root finding requires a squarefree polynomial over Q."""


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal working precision plus guard digits for internal slack.

    Results of an operation taking a context are accurate to roughly
    10**-working_digits relative to their magnitude; the guard digits are
    consumed internally (rounding, recognition safety margins).
    """

    working_digits: int = 60
    guard_digits: int = 15

    def __post_init__(self) -> None:
        if self.working_digits < 30:
            raise ValueError("working_digits must be >= 30")
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be >= 10")

    @property
    def dps(self) -> int:
        return self.working_digits + self.guard_digits

    @property
    def eps(self):
        with self.workprec():
            return mp.mpf(10) ** (-self.working_digits)

    def tight_eps(self):
        """Error floor used for internal certifications (working - guard)."""
        with self.workprec():
            return mp.mpf(10) ** (-(self.working_digits - self.guard_digits))

    def workprec(self, extra_digits: int = 0):
        return mp.workdps(self.dps + extra_digits)

    def double(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.working_digits, self.guard_digits)


GOLDEN_CONTEXT = PrecisionContext(110, 25)


# ----------------------------------------------------------------------
# polynomial helpers over Q (ascending coefficient lists of Fractions)
# ----------------------------------------------------------------------

def _to_fraction_poly(coeffs: Sequence) -> list[Fraction]:
    p = [Fraction(c) for c in coeffs]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def poly_deriv(p: Sequence[Fraction]) -> list[Fraction]:
    return [i * p[i] for i in range(1, len(p))] or [Fraction(0)]


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(1, len(a) - db)
    while len(a) - 1 >= db and any(c != 0 for c in a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - 1 - db
        f = a[-1] / lb
        q[k] = f
        for i in range(db + 1):
            a[k + i] -= f * b[i]
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, (a or [Fraction(0)])


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _to_fraction_poly(a), _to_fraction_poly(b)
    while any(c != 0 for c in b):
        _, r = poly_divmod(a, b)
        a, b = b, _to_fraction_poly(r)
    if a[-1] != 0:
        a = [c / a[-1] for c in a]
    return a


def is_squarefree(coeffs: Sequence) -> bool:
    p = _to_fraction_poly(coeffs)
    return len(poly_gcd(p, poly_deriv(p))) == 1


# ----------------------------------------------------------------------
# complex roots with conjugate pairing and signature
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RootData:
    """All complex roots of a rational polynomial at context precision.

    roots[i] for i < r1 are the real roots (ascending); the remaining 2*r2
    entries come in adjacent conjugate pairs, positive imaginary part first.
    conjugate_index[i] gives the index of the complex conjugate root.
    """

    roots: tuple
    signature: tuple[int, int]
    conjugate_index: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.roots)


def complex_roots(coeffs: Sequence, ctx: PrecisionContext) -> RootData:
    """Roots of a squarefree rational polynomial, certified to ctx precision."""
    p = _to_fraction_poly(coeffs)
    n = len(p) - 1
    if n < 1:
        raise ValueError("degree must be >= 1")
    if not is_squarefree(p):
        raise NonSquarefreeError("polynomial has repeated roots over Q")
    height = max(abs(float(c)) for c in p)
    for attempt in range(4):
        extra = 20 + ctx.guard_digits + attempt * ctx.dps
        with ctx.workprec(extra):
            cs = [mp.mpf(c.numerator) / c.denominator for c in reversed(p)]
            try:
                raw = mpmath.polyroots(cs, maxsteps=200 + 50 * n, extraprec=10 * ctx.dps)
            except mpmath.libmp.NoConvergence:
                continue
            sep = min(abs(raw[i] - raw[j]) for i in range(n) for j in range(i + 1, n)) if n > 1 else mp.mpf(1)
            thresh = mp.mpf(10) ** (-(ctx.working_digits)) * (1 + height)
            if n > 1 and sep < 4 * thresh:
                continue
            # a root of a real polynomial is real iff its conjugate is itself,
            # i.e. |Im| is far below the root separation
            reals, pos = [], []
            ok = True
            for r in raw:
                if abs(mp.im(r)) < sep / 4:
                    reals.append(mp.re(r))
                elif mp.im(r) > 0:
                    pos.append(r)
            if len(reals) + 2 * len(pos) != n:
                continue
            reals.sort()
            pos.sort(key=lambda z: (mp.re(z), mp.im(z)))
            roots = [mp.mpc(r, 0) for r in reals]
            conj = list(range(len(reals)))
            for z in pos:
                roots.append(z)
                roots.append(mp.conj(z))
                conj.extend([len(roots) - 1, len(roots) - 2])
            fp = [mpmath.polyval(cs, r) for r in roots]
            if max(abs(v) for v in fp) > thresh:
                continue
            return RootData(tuple(roots), (len(reals), len(pos)), tuple(conj))
    raise PrecisionError("failed to certify root separation; raise the working precision")


# ----------------------------------------------------------------------
# Bloch-Wigner function
# ----------------------------------------------------------------------

def bloch_wigner(z, ctx: PrecisionContext):
    """D(z) = Im Li_2(z) + log|z| * arg(1 - z), real-valued; D(0) is an error.

    The i factor making this land in i*R is tracked by the caller (the
    regulator code multiplies by a single symbolic i).
    """
    with ctx.workprec(10):
        z = mp.mpc(z)
        if z == 0:
            raise ValueError("D(0) is undefined")
        if mp.im(z) == 0:
            return mp.mpf(0)
        li2 = mpmath.polylog(2, z)
        return mp.im(li2) + mp.log(abs(z)) * mp.arg(1 - z)


def bloch_wigner_integral(z, ctx: PrecisionContext, z0=None):
    """D(z) by direct numerical integration of log|w| d(arg(1-w)) - log|1-w| d(arg w).

    Straight path from a real base point; independent cross-check of the
    closed form (not for production use).
    """
    with ctx.workprec(10):
        z = mp.mpc(z)
        a = mp.mpf(z0) if z0 is not None else mp.mpf("0.5")

        def integrand(u):
            w = a + (z - a) * u
            dw = z - a
            # d arg w = Im(dw/w), d log|1-w| handled via -Im(dw/(1-w)) etc.
            darg_w = mp.im(dw / w)
            darg_1mw = mp.im(-dw / (1 - w))
            return mp.log(abs(w)) * darg_1mw - mp.log(abs(1 - w)) * darg_w

        return mp.quad(integrand, [0, 1])


# ----------------------------------------------------------------------
# power series helpers (dense lists over mpf/mpc at ambient precision)
# ----------------------------------------------------------------------

def _ser_mul(a, b, L):
    out = [mp.mpf(0)] * L
    for i, ai in enumerate(a):
        if i >= L:
            break
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j >= L:
                break
            out[i + j] += ai * bj
    return out

def _ser_exp(a, L):
    # exp of a series with a[0] arbitrary
    out = [mp.exp(a[0])] + [mp.mpf(0)] * (L - 1)
    # out' = a' * out
    for k in range(1, L):
        s = mp.mpf(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            s += j * a[j] * out[k - j]
        out[k] = s / k
    return out

def _ser_div_linear(a, c, L):
    # divide by (w - c), c != 0: multiply by -(1/c) * sum (w/c)^q
    c = mp.mpc(c)
    if mp.im(c) == 0:
        c = mp.re(c)
    inv = -1 / c
    out = [mp.mpf(0)] * L
    acc = inv
    geo = [inv]
    for _ in range(1, L):
        geo.append(geo[-1] / c)
    for i, ai in enumerate(a):
        if i >= L or ai == 0:
            continue
        for q in range(L - i):
            out[i + q] += ai * geo[q]
    return out

def _gamma_taylor(x0, L):
    """Taylor coefficients of Gamma(x0 + w) to order L-1; x0 not a pole."""
    K = 0
    while mp.re(x0) + K < 1:
        K += 1
    y0 = x0 + K
    lng = [mp.loggamma(y0)]
    for k in range(1, L):
        lng.append(mpmath.psi(k - 1, y0) / mp.factorial(k))
    g = _ser_exp(lng, L)
    # Gamma(x0+w) = Gamma(y0+w) / prod_{i=0}^{K-1} (x0+i+w)
    for i in range(K):
        c = -(x0 + i)  # divide by (w - c) with c = -(x0+i)
        g = _ser_div_linear(g, c, L)
    return g


class Laurent:
    """Finite Laurent expansion sum coeffs[i] * w**(ord+i)."""

    __slots__ = ("ord", "coeffs")

    def __init__(self, ord: int, coeffs):
        self.ord = ord
        self.coeffs = list(coeffs)

    def __mul__(self, other: "Laurent") -> "Laurent":
        L = min(len(self.coeffs), len(other.coeffs))
        return Laurent(self.ord + other.ord, _ser_mul(self.coeffs, other.coeffs, L))

    def coeff(self, e: int):
        i = e - self.ord
        if i < 0 or i >= len(self.coeffs):
            return mp.mpf(0)
        return self.coeffs[i]

    def scale(self, c) -> "Laurent":
        return Laurent(self.ord, [a * c for a in self.coeffs])

    def div_linear(self, c) -> "Laurent":
        return Laurent(self.ord, _ser_div_linear(self.coeffs, c, len(self.coeffs)))


def _gammaR_laurent(c0, L) -> Laurent:
    """Laurent expansion of Gamma_R(c0 + w) = pi^-(c0+w)/2 Gamma((c0+w)/2) at w=0."""
    c0 = mp.mpc(c0)
    if mp.im(c0) == 0:
        c0 = mp.re(c0)
    pi_part = _ser_exp([-mp.log(mp.pi) * c0 / 2, -mp.log(mp.pi) / 2], L)
    a0 = c0 / 2
    is_nonpos_int = (mp.im(mp.mpc(a0)) == 0 and mp.re(mp.mpc(a0)) == mp.nint(mp.re(mp.mpc(a0)))
                     and mp.re(mp.mpc(a0)) <= 0)
    if is_nonpos_int:
        j = int(-mp.re(mp.mpc(a0)))
        # Gamma(a0 + u) = Gamma(1+u) / (u * prod_{i=1}^{j} (u - i))
        num = _gamma_taylor(mp.mpf(1), L)
        for i in range(1, j + 1):
            num = _ser_div_linear(num, mp.mpf(i), L)
        lau = Laurent(-1, num)  # the 1/u factor
    else:
        lau = Laurent(0, _gamma_taylor(a0, L))
    # substitute u = w/2: coefficient of w^e picks up 2^-e
    coeffs = [lau.coeffs[i] * mp.mpf(2) ** (-(lau.ord + i)) for i in range(len(lau.coeffs))]
    lau = Laurent(lau.ord, coeffs)
    return lau * Laurent(0, pi_part)


def gamma_product_laurent(shifts: tuple[int, ...], z0, L: int) -> Laurent:
    """Laurent expansion at z0 of prod_j Gamma_R(z + shift_j)."""
    out = Laurent(0, [mp.mpf(1)] + [mp.mpf(0)] * (L - 1))
    for lam in shifts:
        out = out * _gammaR_laurent(mp.mpc(z0) + lam, L)
    return out


def gamma_factor_value(shifts: tuple[int, ...], s):
    """prod_j Gamma_R(s + shift_j) at an s that is not a pole."""
    v = mp.mpf(1) if mp.im(mp.mpc(s)) == 0 else mp.mpc(1)
    for lam in shifts:
        z = mp.mpc(s) + lam
        v *= mp.pi ** (-z / 2) * mp.gamma(z / 2)
    return v


def gamma_factor_taylor(shifts: tuple[int, ...], s0, L: int):
    """Taylor coefficients at an analytic point s0 of prod_j Gamma_R(s + shift_j)."""
    out = [mp.mpc(1)] + [mp.mpc(0)] * (L - 1)
    for lam in shifts:
        z0 = mp.mpc(s0) + lam
        pi_part = _ser_exp([-mp.log(mp.pi) * z0 / 2, -mp.log(mp.pi) / 2], L)
        g = _gamma_taylor(z0 / 2, L)
        g = [g[k] * mp.mpf(2) ** (-k) for k in range(L)]
        out = _ser_mul(out, _ser_mul(pi_part, g, L), L)
    return out


class GammaKernel:
    """Incomplete inverse-Mellin kernel for a Gamma_R shift pattern.

    value(s, t, k) evaluates the k-th s-derivative of
        Ginc(s, t) = integral_t^infinity phi(u) u^(s-1) du,
    phi being the inverse Mellin transform of prod_j Gamma_R(s + shift_j).
    Small-t residue series with dynamically raised internal precision; the
    degree <= 2 patterns take the closed incomplete-gamma path.
    """

    def __init__(self, shifts: Sequence[int], ctx: PrecisionContext, kmax: int = 2):
        if any(l not in (0, 1) for l in shifts):
            raise ValueError("shifts must be 0 or 1")
        self.shifts = tuple(sorted(shifts))
        self.a = self.shifts.count(0)
        self.b = self.shifts.count(1)
        self.degree = len(self.shifts)
        self.ctx = ctx
        self.kmax = kmax
        self._table: list[Laurent] = []
        self._table_dps = 0

    # -- residue table ---------------------------------------------------
    def _pole_order(self, m: int) -> int:
        return self.a if m % 2 == 0 else self.b

    def _ensure_table(self, M: int, dps: int) -> None:
        L = max(self.a, self.b) + self.kmax + 3
        if dps > self._table_dps:
            self._table = []
            self._table_dps = dps
        with mp.workdps(self._table_dps):
            if not self._table:
                self._table.append(gamma_product_laurent(self.shifts, 0, L))
                if M >= 1:
                    self._table.append(gamma_product_laurent(self.shifts, -1, L))
            d = self.degree
            two_pi_d = (2 * mp.pi) ** d
            while len(self._table) <= M:
                m_next = len(self._table)
                prev = self._table[m_next - 2]
                cur = prev.scale(two_pi_d)
                for lam in self.shifts:
                    cur = cur.div_linear(mp.mpf(m_next - lam))
                self._table.append(cur)

    # -- elementary integrals int_0^t u^(nu-1) log^j u du ----------------
    @staticmethod
    def _I_list(nu, t_pow_nu, logt, jmax: int):
        out = []
        for j in range(jmax + 1):
            s = mp.mpf(0)
            fj = mp.factorial(j)
            for i in range(j + 1):
                s += (-1) ** (j - i) * fj / mp.factorial(i) * logt ** i / nu ** (j - i + 1)
            out.append(t_pow_nu * s)
        return out

    def extra_digits(self, t) -> int:
        """Internal precision premium absorbing the series' alternating peak."""
        tf = float(t)
        if tf <= 0:
            return 10
        x = self.degree * _math.pi * tf ** (2.0 / self.degree)
        return int(2.05 * x / _math.log(10)) + 15

    def value(self, s, t, k: int = 0):
        ctx = self.ctx
        with ctx.workprec(10):
            t = mp.mpf(t)
            if t <= 0:
                raise ValueError("t must be positive")
            s = mp.mpc(s)
        if k == 0 and self.shifts in ((0,), (1,), (0, 1)):
            return self._closed_form(s, t)
        return self._series(s, t, k)

    def _closed_form(self, s, t):
        ctx = self.ctx
        extra = max(10, int(0.9 * self.extra_digits(t)))
        with ctx.workprec(extra):
            s = mp.mpc(s)
            if mp.im(s) == 0:
                s = mp.re(s)
            if self.shifts == (0, 1):
                return 2 * (2 * mp.pi) ** (-s) * mpmath.gammainc(s, 2 * mp.pi * t)
            if self.shifts == (0,):
                return mp.pi ** (-s / 2) * mpmath.gammainc(s / 2, mp.pi * t ** 2)
            return mp.pi ** (-(s + 1) / 2) * mpmath.gammainc((s + 1) / 2, mp.pi * t ** 2)

    def _pole_index(self, s) -> int | None:
        if mp.im(s) != 0:
            return None
        sr = mp.re(s)
        m = int(mp.nint(sr))
        if sr != m or m > 0:
            return None
        if self._pole_order(-m) == 0:
            return None
        return -m

    def _series(self, s, t, k: int):
        ctx = self.ctx
        extra = self.extra_digits(t)
        target_dps = ctx.dps + extra
        with mp.workdps(target_dps + 10):
            s = mp.mpc(s)
            if mp.im(s) == 0:
                s = mp.re(s)
            t = mp.mpf(t)
            m0 = self._pole_index(s)
            if m0 is None:
                dist = min(abs(s + m) for m in range(0, 2 * int(abs(s)) + 4) if self._pole_order(m) > 0)
                if dist < mp.mpf("0.5"):
                    raise PrecisionError("kernel evaluation too close to a Gamma pole; "
                                         "evaluate at the pole exactly or move s")
            jmax_tab = max(self.a, self.b) - 1
            M0 = 64
            self._ensure_table(M0, target_dps + 10)
            logt = mp.log(t)
            tol = mp.mpf(10) ** (-(target_dps))
            total = mp.mpc(0)
            maxmag = mp.mpf(0)
            t_pow = t ** s  # t^(m+s), updated incrementally
            m = 0
            quiet = 0
            while True:
                if m >= len(self._table):
                    self._ensure_table(len(self._table) + 128, target_dps + 10)
                lau = self._table[m]
                if m == m0:
                    term = None  # handled via Laurent combination below
                else:
                    nu = s + m
                    r_ord = -lau.ord if lau.ord < 0 else 0
                    if r_ord:
                        Ints = self._I_list(nu, t_pow, logt, r_ord - 1 + k)
                        term = mp.mpc(0)
                        for q in range(r_ord):
                            rq = lau.coeff(-1 - q) * (-1) ** q / mp.factorial(q)
                            term += rq * Ints[q + k]
                    else:
                        term = mp.mpc(0)
                if term is not None and term != 0:
                    total += term
                    mag = abs(term)
                    maxmag = max(maxmag, mag)
                    quiet = quiet + 1 if mag < tol * max(1, maxmag) else 0
                else:
                    quiet += 1 if m > 2 * self.degree else 0
                if quiet >= 6 and m > 4:
                    break
                if m > 100000:
                    raise PrecisionError("kernel series failed to converge")
                t_pow *= t
                m += 1
            if m0 is None:
                gk = gamma_factor_taylor(self.shifts, s, k + 1)[k] * mp.factorial(k)
                res = gk - total
            else:
                res = self._pole_combination(s, m0, t, logt, k, target_dps) - total
            return +res if mp.im(res) != 0 else mp.re(res) + mp.mpc(0) * 0

    def _pole_combination(self, s, m0: int, t, logt, k: int, eval_dps: int):
        """k! [w^k] of (gamma(s0+w) - T_m0(s0+w)) at the pole s0 = -m0."""
        lau = self._table[m0]
        L = len(lau.coeffs)
        nu_ord = lau.ord
        # T_m0 as Laurent in w: sum_q r_q * I_q(w, t) with
        # I_q(w,t) = t^w sum_{i<=q} (-1)^(q-i) (q!/i!) logt^i w^(i-q-1)
        tpw = [logt ** n / mp.factorial(n) for n in range(L + self.kmax + 2)]  # t^w coefficients
        acc = {}
        r_ord = -nu_ord
        for q in range(r_ord):
            rq = lau.coeff(-1 - q) * (-1) ** q / mp.factorial(q)
            if rq == 0:
                continue
            fq = mp.factorial(q)
            for i in range(q + 1):
                c = rq * (-1) ** (q - i) * fq / mp.factorial(i) * logt ** i
                e0 = i - q - 1
                for n, tn in enumerate(tpw):
                    e = e0 + n
                    if e > k:
                        break
                    acc[e] = acc.get(e, mp.mpc(0)) + c * tn
        diff_k = lau.coeff(k) - acc.get(k, mp.mpc(0))
        # sanity: principal parts must cancel exactly in theory
        for e in range(nu_ord, 0):
            resid = lau.coeff(e) - acc.get(e, mp.mpc(0))
            scale = max(abs(lau.coeff(e)), mp.mpf(1))
            if abs(resid) > scale * mp.mpf(10) ** (-(min(eval_dps, self._table_dps) - 12)):
                raise PrecisionError("pole cancellation failed in Gamma kernel")
        return diff_k * mp.factorial(k)


def g_kernel(s, t, shifts: Sequence[int], derivative_order: int, ctx: PrecisionContext):
    """One-shot interface for GammaKernel.value (kernels should be reused)."""
    return GammaKernel(shifts, ctx, kmax=max(2, derivative_order)).value(s, t, derivative_order)


# ----------------------------------------------------------------------
# exact integer matrices: HNF, SNF, kernels, LLL
# ----------------------------------------------------------------------

IntMatrix = list[list[int]]


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for kk in range(m):
            a = Ai[kk]
            if a:
                Bk = B[kk]
                oi = out[i]
                for j in range(p):
                    oi[j] += a * Bk[j]
    return out


def hnf(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form: returns (H, U) with H = U*A, U unimodular.

    H is in row echelon form with positive pivots and entries above each
    pivot reduced to [0, pivot).
    """
    H = [row[:] for row in A]
    n = len(H)
    m = len(H[0]) if n else 0
    U = _identity(n)
    r = 0
    for c in range(m):
        piv = None
        for i in range(r, n):
            if H[i][c] != 0 and (piv is None or abs(H[i][c]) < abs(H[piv][c])):
                piv = i
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        while True:
            done = True
            for i in range(r + 1, n):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    if q:
                        H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                        U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][c]:
                        H[r], H[i] = H[i], H[r]
                        U[r], U[i] = U[i], U[r]
                        done = False
            if done:
                break
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
        if r == n:
            break
    return H, U


def right_kernel(A: IntMatrix) -> list[list[int]]:
    """Basis of the integer lattice {x : A x = 0} (primitive, saturated)."""
    if not A:
        return []
    m = len(A[0])
    At = [[A[i][j] for i in range(len(A))] for j in range(m)]
    H, U = hnf(At)
    ker = []
    for i in range(m):
        if all(v == 0 for v in H[i]):
            ker.append(U[i])
    return ker


def integer_kernel_lll(A: IntMatrix) -> list[list[int]]:
    """Kernel vectors {x : A x = 0} via LLL with an exact zero test.

    Scales the image coordinates by a huge constant so LLL pushes kernel
    vectors to the front with small coefficients; membership is certified by
    exact evaluation, so the scaling only affects completeness, not
    soundness.  Unlike the HNF route this never suffers transform-matrix
    entry explosion.
    """
    if not A:
        return []
    n_rows, m = len(A), len(A[0])
    max_a = max((abs(x) for row in A for x in row), default=1) or 1
    C = (m * max_a) ** 2 * 10 ** 30
    rows = []
    for i in range(m):
        rows.append([1 if j == i else 0 for j in range(m)]
                    + [C * A[r][i] for r in range(n_rows)])
    red = lll_reduce(rows)
    out = []
    for row in red:
        x = row[:m]
        if not any(x):
            continue
        if all(sum(A[r][i] * x[i] for i in range(m)) == 0 for r in range(n_rows)):
            out.append(x)
    return out


def snf(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (U, D, V) with U*A*V = D, d1 | d2 | ..."""
    D = [row[:] for row in A]
    n = len(D)
    m = len(D[0]) if n else 0
    U, V = _identity(n), _identity(m)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        D[dst] = [x - q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def addmul_col(dst, src, q):
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(n, m):
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                if D[i][j] != 0 and (piv is None or abs(D[i][j]) < abs(D[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            changed = False
            for i in range(t + 1, n):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    addmul_row(i, t, q)
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, m):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    addmul_col(j, t, q)
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if not changed:
                break
        # divisibility: fold any non-divisible entry into the pivot
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if D[i][j] % D[t][t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            addmul_row(t, bad, -1)
            continue
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def lll_reduce(basis: IntMatrix) -> IntMatrix:
    """LLL reduction (delta = 3/4) of linearly independent integer rows.

    All-integer variant: Gram data kept as lam[k][l] = mu_kl * D[l+1] and
    D[i] = det of the leading i x i Gram block, so every division is exact.
    """
    b = [row[:] for row in basis]
    n = len(b)
    if n <= 1:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    lam = [[0] * n for _ in range(n)]
    D = [0] * (n + 1)
    D[0] = 1

    def incremental_gram(k: int) -> None:
        for j in range(k + 1):
            u = dot(b[k], b[j])
            for i in range(j):
                u = (D[i + 1] * u - lam[k][i] * lam[j][i]) // D[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("lll_reduce requires linearly independent rows")
                D[k + 1] = u

    def reduce_pair(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > D[l + 1]:
            q = (2 * lam[k][l] + D[l + 1]) // (2 * D[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * D[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lam_ = lam[k][k - 1]
        Bnew = (D[k - 1] * D[k + 1] + lam_ * lam_) // D[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (D[k + 1] * lam[i][k - 1] - lam_ * t) // D[k]
            lam[i][k - 1] = (Bnew * t + lam_ * lam[i][k]) // D[k + 1]
        D[k] = Bnew

    incremental_gram(0)
    kmax = 0
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            incremental_gram(k)
        reduce_pair(k, k - 1)
        # Lovasz with delta = 3/4: swap iff 4(D[k+1]D[k-1] + lam^2) < 3 D[k]^2
        if 4 * (D[k + 1] * D[k - 1] + lam[k][k - 1] ** 2) < 3 * D[k] ** 2:
            swap(k, kmax)
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                reduce_pair(k, l)
            k += 1
    return b


def _relation_candidates(values: Sequence, ctx: PrecisionContext):
    """LLL-reduced candidate relation vectors for the given values.

    Returns (candidates, certify, grey) where certify(c) tests the residual
    against the certification threshold and grey(c) flags the ambiguous band
    between certified and clearly-non-vanishing.
    """
    vals = [mp.mpc(v) for v in values]
    n = len(vals)
    scale = mp.mpf(10) ** (ctx.working_digits - ctx.guard_digits)
    has_im = any(abs(mp.im(v)) > ctx.eps for v in vals)
    rows = []
    for i, v in enumerate(vals):
        row = [1 if j == i else 0 for j in range(n)]
        row.append(int(mp.nint(scale * mp.re(v))))
        if has_im:
            row.append(int(mp.nint(scale * mp.im(v))))
        rows.append(row)
    red = lll_reduce(rows)
    thresh = mp.mpf(10) ** (-(ctx.working_digits - 2 * ctx.guard_digits))

    def residual(c):
        return abs(sum(ci * vi for ci, vi in zip(c, vals)))

    def certify(c):
        return residual(c) < thresh * max(1, max(abs(x) for x in c))

    def grey(c):
        r = residual(c)
        ceil = thresh * mp.mpf(10) ** ctx.guard_digits
        return thresh * max(1, max(abs(x) for x in c)) <= r < ceil

    cands = [row[:n] for row in red if any(row[:n])]
    cands.sort(key=lambda c: max(abs(x) for x in c))
    return cands, certify, grey


def find_integer_relation(values: Sequence, ctx: PrecisionContext,
                          max_coeff: int | None = None) -> list[int] | None:
    """Integer relation sum c_i v_i ~ 0 among real/complex values, via LLL.

    Returns the smallest certified relation or None.  Raises PrecisionError
    when a candidate sits in the ambiguous band where the precision cannot
    separate a true relation from noise.
    """
    with ctx.workprec():
        cands, certify, grey = _relation_candidates(values, ctx)
        saw_grey = False
        for c in cands:
            if max_coeff is not None and max(abs(x) for x in c) > max_coeff:
                continue
            if certify(c):
                return [int(x) for x in c]
            if grey(c):
                saw_grey = True
        if saw_grey:
            raise PrecisionError("integer relation ambiguous at this precision")
        return None


def recognize_algebraic(x, basis_embeddings: Sequence, ctx: PrecisionContext,
                        height_bound: int = 10 ** 12):
    """Write x as a rational combination of the given embedded basis values.

    Returns (coefficients as Fractions, achieved residual) or None.  The
    relation is sought on the lattice spanned by (x, b_1, ..., b_n); the
    leading coefficient becomes the common denominator.
    """
    with ctx.workprec():
        vals = [mp.mpc(x)] + [mp.mpc(b) for b in basis_embeddings]
        cands, certify, _ = _relation_candidates(vals, ctx)
        for c in cands:
            if c[0] == 0 or not certify(c):
                continue
            if max(abs(v) for v in c) > height_bound:
                continue
            coeffs = [Fraction(-ci, c[0]) for ci in c[1:]]
            approx = sum(mp.mpf(f.numerator) / f.denominator * b
                         for f, b in zip(coeffs, vals[1:]))
            resid = abs(mp.mpc(x) - approx)
            if resid <= ctx.tight_eps() * max(1, max(abs(v) for v in vals)):
                return coeffs, resid
        return None
