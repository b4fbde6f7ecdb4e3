"""Exceptional (T-)unit discovery, roots of unity, w-invariants, and exact
decomposition of units over a multiplicative lattice basis.

Every membership claim that matters downstream is certified by exact field
arithmetic; numerics (log solves) only propose candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import mp

from k3reg.chars import CyclotomicNumber, cyclotomic_poly, _euler_phi, _gcd
from k3reg.mpnum import PrecisionContext, PrecisionError, lll_reduce
from k3reg.numfield import FieldElement, GaloisGroup, NumberField, minpoly_root_in_field


class UnitsError(ValueError):
    pass


def _prime_support(n: Fraction) -> set[int]:
    out = set()
    for v in (abs(n.numerator), n.denominator):
        d = 2
        while d * d <= v:
            while v % d == 0:
                out.add(d)
                v //= d
            d += 1
        if v > 1:
            out.add(v)
    return out


def is_exceptional(x: FieldElement, t_primes: frozenset[int] = frozenset()) -> bool:
    """x and 1 - x are both T-units (norm support within t_primes)."""
    if x.is_zero() or (1 - x).is_zero():
        return False
    nx = x.norm()
    ny = (1 - x).norm()
    if nx == 0 or ny == 0:
        return False
    return _prime_support(nx) <= t_primes and _prime_support(ny) <= t_primes


def exceptional_unit_search(F: NumberField, seeds: Sequence[FieldElement],
                            group: GaloisGroup | None = None,
                            t_primes: Iterable[int] = (),
                            count_target: int = 64,
                            close_under_derived: bool = True) -> list[FieldElement]:
    """Exceptional T-units generated from seeds.

    Closes the seed set under x -> 1-x, 1/x, -(1-x)^2/x and the Galois orbit,
    keeping elements whose norms (and co-norms) are supported on t_primes.
    All norm tests are exact resultants.
    """
    t_primes = frozenset(t_primes)
    found: list[FieldElement] = []
    seen: set = set()
    frontier = [F.element(s) for s in seeds]
    while frontier and len(found) < count_target:
        nxt = []
        for x in frontier:
            if x.coeffs in seen:
                continue
            seen.add(x.coeffs)
            if not is_exceptional(x, t_primes):
                continue
            found.append(x)
            candidates = []
            if close_under_derived:
                one_minus = 1 - x
                candidates += [one_minus, x.inverse(), -(one_minus * one_minus) / x]
            if group is not None:
                candidates += [g(x) for g in group.elements]
            for y in candidates:
                if y.coeffs not in seen:
                    nxt.append(y)
        frontier = nxt
    return found


def torsion_order(F: NumberField, ctx: PrecisionContext) -> tuple[int, FieldElement]:
    """(w, zeta): the number of roots of unity in F and a generator."""
    w = 2
    n = F.degree
    cand = [m for m in range(3, 2 * n * n + 2) if _euler_phi(m) <= n]
    for m in sorted(cand):
        if w % m == 0:
            continue
        root = minpoly_root_in_field([Fraction(c) for c in cyclotomic_poly(m)], F, ctx)
        if root is not None:
            w = w * m // _gcd(w, m)
    if w == 2:
        return 2, F.element(-1)
    zeta = minpoly_root_in_field([Fraction(c) for c in cyclotomic_poly(w)], F, ctx)
    if zeta is None:
        raise UnitsError("torsion bookkeeping inconsistent")
    return w, zeta


def _real_cyclotomic_minpoly(q: int) -> list[Fraction]:
    """Minimal polynomial of zeta_q + zeta_q^-1, exactly."""
    z = CyclotomicNumber.zeta(q)
    orbit = []
    seen = set()
    for j in range(1, q):
        if _gcd(j, q) != 1:
            continue
        val = z.galois(j) + z.galois(q - j)
        if val.coeffs in seen:
            continue
        seen.add(val.coeffs)
        orbit.append(val)
    # product of (x - val) over the orbit, coefficients descend to Q
    poly = [CyclotomicNumber.rational(q, 1)]
    for val in orbit:
        new = [CyclotomicNumber.rational(q, 0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - val * c
        poly = new
    out = []
    for c in poly:
        if not c.is_rational():
            raise UnitsError("real cyclotomic minimal polynomial is not rational")
        out.append(c.to_fraction())
    return out


def w_invariant(F: NumberField | None, a: int, ctx: PrecisionContext) -> int:
    """w_a(L) for a = 2: the order of the group of 'square-trivial' roots of unity.

    q = p^k divides w_2(L) iff Gal(Q(zeta_q)/Q(zeta_q) cap L) has exponent
    dividing 2, i.e. iff the fixed field of {j : j^2 = 1 mod q} embeds in L.
    For odd q that fixed field is Q(zeta_q + zeta_q^-1); for q = 2^k >= 16 it
    is Q(zeta_(q/2) + zeta_(q/2)^-1); q in {2, 4, 8, 3} always divide.
    """
    if a != 2:
        raise NotImplementedError("only a = 2 ships")
    deg = 1 if F is None else F.degree
    w = 1

    def contains_real_cyclotomic(q: int) -> bool:
        mp_deg = _euler_phi(q) // 2
        if mp_deg <= 1:
            return True
        if F is None or deg % mp_deg != 0:
            return False
        return minpoly_root_in_field(_real_cyclotomic_minpoly(q), F, ctx) is not None

    # 2-part
    two_part = 8
    q = 16
    while _euler_phi(q) <= 2 * deg:
        if contains_real_cyclotomic(q // 2):
            two_part = q
            q *= 2
        else:
            break
    w *= two_part
    # odd parts: q = p^k contributes iff the real cyclotomic field of level q
    # (degree phi(q)/2) embeds in L
    p = 3
    while p - 1 <= 2 * deg:
        if _is_prime(p):
            pk, best = p, 1
            while _euler_phi(pk) <= 2 * deg:
                if contains_real_cyclotomic(pk):
                    best = pk
                    pk *= p
                else:
                    break
            w *= best
        p += 2
    return w


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ExponentVector:
    """x = zeta^torsion_exp * prod basis_i^exps_i, exactly."""

    torsion_exp: int
    exps: tuple[int, ...]


class MultiplicativeLattice:
    """Torsion root of unity plus a multiplicatively independent unit basis."""

    def __init__(self, field: NumberField, torsion_order_w: int, torsion_gen: FieldElement,
                 basis: Sequence[FieldElement], t_primes: Iterable[int], ctx: PrecisionContext):
        self.field = field
        self.w = torsion_order_w
        self.zeta = torsion_gen
        self.basis = list(basis)
        self.t_primes = tuple(sorted(set(t_primes)))
        self.ctx = ctx
        self._log_cols: list[list] | None = None
        if self.basis:
            self._assert_log_rank()

    # -- log coordinates ----------------------------------------------------
    def _log_vector(self, x: FieldElement) -> list:
        """Archimedean log row plus T-valuation coordinates (exact v_p of norm)."""
        F = self.field
        ctx = self.ctx
        rd = F.embeddings(ctx)
        r1, r2 = rd.signature
        with ctx.workprec():
            out = []
            for j in range(r1 + r2):
                idx = j if j < r1 else r1 + 2 * (j - r1)
                out.append(mp.log(abs(F.embed(x, idx, ctx))))
            n = x.norm()
            for p in self.t_primes:
                v = 0
                num, den = n.numerator, n.denominator
                while num % p == 0:
                    num //= p
                    v += 1
                while den % p == 0:
                    den //= p
                    v -= 1
                out.append(mp.mpf(v))
            return out

    def _columns(self) -> list[list]:
        if self._log_cols is None:
            self._log_cols = [self._log_vector(b) for b in self.basis]
        return self._log_cols

    def _assert_log_rank(self) -> None:
        cols = self._columns()
        m = len(cols)
        if m == 0:
            return
        with self.ctx.workprec():
            G = mp.matrix(m, m)
            for i in range(m):
                for j in range(m):
                    G[i, j] = sum(a * b for a, b in zip(cols[i], cols[j]))
            det = mp.det(G)
            if abs(det) < mp.mpf(10) ** (-self.ctx.working_digits // 2):
                raise UnitsError("log matrix rank-deficient: basis not independent "
                                 "at working precision")

    # -- decomposition -------------------------------------------------------
    def decompose(self, x: FieldElement) -> ExponentVector:
        """Exact exponents with x = zeta^t * prod b_i^e_i; UnitsError if outside."""
        ctx = self.ctx
        cols = self._columns()
        m = len(cols)
        v = self._log_vector(x)
        with ctx.workprec():
            if m:
                G = mp.matrix(m, m)
                rhs = mp.matrix(m, 1)
                for i in range(m):
                    rhs[i] = sum(a * b for a, b in zip(cols[i], v))
                    for j in range(m):
                        G[i, j] = sum(a * b for a, b in zip(cols[i], cols[j]))
                sol = mp.lu_solve(G, rhs)
                exps = [int(mp.nint(sol[i])) for i in range(m)]
                resid = max(abs(sol[i] - exps[i]) for i in range(m))
                if resid > mp.mpf("0.25"):
                    raise UnitsError("exponent solve did not round confidently; "
                                     "element may be outside the lattice span")
            else:
                exps = []
        q = x
        for b, e in zip(self.basis, exps):
            q = q * b ** (-e)
        tors = self._match_torsion(q)
        if tors is None:
            raise UnitsError("element is outside the lattice span (exact check failed)")
        return ExponentVector(tors, tuple(exps))

    def _match_torsion(self, q: FieldElement) -> int | None:
        cur = self.field.one()
        for t in range(self.w):
            if q == cur:
                return t
            cur = cur * self.zeta
        return None

    def evaluate(self, ev: ExponentVector) -> FieldElement:
        out = self.zeta ** (ev.torsion_exp % self.w)
        for b, e in zip(self.basis, ev.exps):
            out = out * b ** e
        return out

    def extend(self, x: FieldElement) -> "MultiplicativeLattice":
        """New lattice with x appended; rejects multiplicatively dependent x."""
        try:
            self.decompose(x)
        except UnitsError:
            new = MultiplicativeLattice(self.field, self.w, self.zeta,
                                        self.basis + [x], self.t_primes, self.ctx)
            return new
        raise UnitsError("element already decomposes over the basis")


def _is_torsion(F: NumberField, q: FieldElement, w: int, zeta: FieldElement) -> bool:
    cur = F.one()
    for _ in range(w):
        if q == cur:
            return True
        cur = cur * zeta
    return False


def _relation_lattice(F: NumberField, gens: list[FieldElement], w: int,
                      zeta: FieldElement, log_rows: list[list], ctx: PrecisionContext) -> list[list[int]]:
    """Exactly verified basis of {n : prod gens^n is a root of unity}.

    LLL on the scaled log embedding proposes relations; every proposal is
    certified by exact field arithmetic.  A per-row gcd saturation pass plus
    the exact decomposition check in build_lattice guard the result.
    """
    from math import gcd
    from k3reg.mpnum import hnf, lll_reduce

    N = len(gens)
    with ctx.workprec():
        scale = mp.mpf(10) ** (ctx.working_digits - ctx.guard_digits)
        rows = []
        for i in range(N):
            rows.append([1 if j == i else 0 for j in range(N)]
                        + [int(mp.nint(scale * v)) for v in log_rows[i]])
        red = lll_reduce(rows)
        tol = mp.mpf(10) ** (-(ctx.working_digits - 3 * ctx.guard_digits))
        cands = []
        for row in red:
            n = row[:N]
            if not any(n):
                continue
            # genuine multiplicative relations have small exponents; huge
            # coefficients are LLL noise whose powers must never be expanded
            height = max(abs(x) for x in n)
            if height > 10 ** 6:
                continue
            res = [mp.mpf(0)] * len(log_rows[0])
            for i, ni in enumerate(n):
                if ni:
                    for k in range(len(res)):
                        res[k] += ni * log_rows[i][k]
            if max(abs(v) for v in res) < tol * (1 + height):
                cands.append(n)
    verified = []
    for n in cands:
        q = F.one()
        for g, e in zip(gens, n):
            if e:
                q = q * g ** e
        if _is_torsion(F, q, w, zeta):
            verified.append(list(n))
    if not verified:
        return []
    while True:
        refined = False
        basis = [row for row in hnf(verified)[0] if any(row)]
        for row in basis:
            g = 0
            for x in row:
                g = gcd(g, abs(x))
            if g > 1:
                cand = [x // g for x in row]
                q = F.one()
                for ge, e in zip(gens, cand):
                    if e:
                        q = q * ge ** e
                if _is_torsion(F, q, w, zeta):
                    verified.append(cand)
                    refined = True
        if not refined:
            return basis


def _rebase(F: NumberField, gens: list[FieldElement], relations: list[list[int]],
            w: int, zeta: FieldElement, ctx: PrecisionContext) -> list[FieldElement]:
    """Basis of <gens> mod torsion, given the (saturated) relation lattice."""
    from k3reg.mpnum import lll_reduce, snf

    N = len(gens)
    if not relations:
        return list(gens)
    U, D, V = snf(relations)
    rank = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i] != 0)
    if any(D[i][i] not in (0, 1) for i in range(rank)):
        raise UnitsError("relation lattice failed to saturate")
    # classes of e_i have coordinates (e_i V); the final N-rank columns are
    # the free part, realized by h_j = prod gens^(V^-1 row)
    Vinv = _int_matrix_inverse(V)
    free_rows = [Vinv[j] for j in range(rank, N)]
    if len(free_rows) > 1:
        free_rows = lll_reduce(free_rows)
    basis = []
    for row in free_rows:
        h = F.one()
        for g, e in zip(gens, row):
            if e:
                h = h * g ** e
        basis.append(h)
    return basis


def build_lattice(F: NumberField, elements: Sequence[FieldElement],
                  t_primes: Iterable[int], ctx: PrecisionContext,
                  torsion: tuple[int, FieldElement] | None = None) -> MultiplicativeLattice:
    """Basis of the group generated by the elements (modulo roots of unity).

    Incremental: each element either decomposes over the current basis or
    triggers a small exact relation computation on (basis, x) followed by a
    change of basis, so no LLL ever exceeds rank+1 dimensions.
    """
    if torsion is None:
        torsion = torsion_order(F, ctx)
    w, zeta = torsion
    t_primes = tuple(sorted(set(t_primes)))
    lat = MultiplicativeLattice(F, w, zeta, [], t_primes, ctx)
    seen = set()
    for x in elements:
        if x.is_zero():
            raise UnitsError("zero element in lattice generators")
        if x.coeffs in seen:
            continue
        seen.add(x.coeffs)
        try:
            lat.decompose(x)
            continue
        except UnitsError:
            pass
        if _is_torsion(F, x, w, zeta):
            continue
        sub = lat.basis + [x]
        logs = [lat._log_vector(b) for b in sub]
        rel = _relation_lattice(F, sub, w, zeta, logs, ctx)
        basis = _rebase(F, sub, rel, w, zeta, ctx)
        lat = MultiplicativeLattice(F, w, zeta, basis, t_primes, ctx)
        lat.decompose(x)  # raises if the rebase went wrong
    return lat


def _int_matrix_inverse(V: list[list[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix, exactly."""
    n = len(V)
    A = [[Fraction(V[i][j]) for j in range(n)]
         + [Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = A[i][n + j]
            assert v.denominator == 1
            row.append(int(v))
        out.append(row)
    return out
