"""Exact cyclotomic arithmetic, character tables, and the coefficient/idempotent
formulas tying characters to embeddings.

Character values live in Q(zeta_m) on the power basis of zeta_m (an integral
basis, so integrality tests are coefficient tests).  The distinguished complex
embedding is always zeta_m = exp(2 pi i / m).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from mpmath import mp

from k3reg.mpnum import PrecisionContext


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the m-th cyclotomic polynomial."""
    # x^m - 1 divided by the product of Phi_d over proper divisors d
    poly = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    for d in range(1, m):
        if m % d == 0:
            phi_d = [Fraction(c) for c in cyclotomic_poly(d)]
            poly = _exact_div(poly, phi_d)
    return tuple(int(c) for c in poly)


def _exact_div(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    db = len(b) - 1
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / b[-1]
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    assert all(x == 0 for x in a[:db]), "non-exact polynomial division"
    return q


def _euler_phi(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


@dataclass(frozen=True)
class CyclotomicNumber:
    """Element of Q(zeta_m) with exact rational coordinates on 1, z, ..., z^(phi(m)-1)."""

    order: int
    coeffs: tuple[Fraction, ...]

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zeta(m: int, k: int = 1) -> "CyclotomicNumber":
        deg = _euler_phi(m)
        raw = [Fraction(0)] * (k % m) + [Fraction(1)]
        return CyclotomicNumber(m, _reduce_mod_phi(raw, m, deg))

    @staticmethod
    def rational(m: int, q) -> "CyclotomicNumber":
        deg = _euler_phi(m)
        return CyclotomicNumber(m, tuple([Fraction(q)] + [Fraction(0)] * (deg - 1)))

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError("cyclotomic orders differ")
            return other
        return CyclotomicNumber.rational(self.order, other)

    # -- ring structure ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CyclotomicNumber(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        deg = len(self.coeffs)
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        conv[i + j] += a * b
        return CyclotomicNumber(self.order, _reduce_mod_phi(conv, self.order, deg))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def inverse(self) -> "CyclotomicNumber":
        # extended Euclid against Phi_m over Q
        phi = [Fraction(c) for c in cyclotomic_poly(self.order)]
        a, b = phi, list(self.coeffs)
        while len(b) > 1 and b[-1] == 0:
            b.pop()
        if b == [Fraction(0)]:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        s_prev, s_cur = [Fraction(0)], [Fraction(1)]
        while True:
            q, r = _poly_divmod_frac(a, b)
            if all(c == 0 for c in r):
                break
            s_next = _poly_sub_frac(s_prev, _poly_mul_frac(q, s_cur))
            a, b, s_prev, s_cur = b, r, s_cur, s_next
        if len(b) != 1:
            raise ZeroDivisionError("zero divisor in cyclotomic field?")
        inv = [c / b[0] for c in s_cur]
        return CyclotomicNumber(self.order, _reduce_mod_phi(inv, self.order, _euler_phi(self.order)))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CyclotomicNumber.rational(self.order, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    # -- Galois action and invariants ---------------------------------------
    def galois(self, j: int) -> "CyclotomicNumber":
        """The automorphism zeta -> zeta^j for gcd(j, m) = 1."""
        m = self.order
        if _gcd(j % m, m) != 1:
            raise ValueError("galois exponent not coprime to the order")
        deg = len(self.coeffs)
        raw = [Fraction(0)] * m
        for k, c in enumerate(self.coeffs):
            raw[(k * j) % m] += c
        return CyclotomicNumber(m, _reduce_mod_phi(raw, m, deg))

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(self.order - 1)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0]

    def is_integral(self) -> bool:
        """Algebraic integer test; the power basis is integral for Q(zeta_m)."""
        return all(c.denominator == 1 for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def norm(self) -> Fraction:
        out = CyclotomicNumber.rational(self.order, 1)
        for j in range(1, self.order + 1):
            if _gcd(j, self.order) == 1:
                out = out * self.galois(j)
        return out.to_fraction()

    def trace(self) -> Fraction:
        out = CyclotomicNumber.rational(self.order, 0)
        for j in range(1, self.order + 1):
            if _gcd(j, self.order) == 1:
                out = out + self.galois(j)
        return out.to_fraction()

    def embed(self, ctx: PrecisionContext):
        with ctx.workprec():
            z = mp.e ** (2j * mp.pi / self.order)
            acc = mp.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * z + mp.mpf(c.numerator) / c.denominator
            return acc

    def __repr__(self):
        return f"Cyc({self.order}; {[str(c) for c in self.coeffs]})"


def _reduce_mod_phi(raw: Sequence[Fraction], m: int, deg: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(m)
    work = list(raw)
    if len(work) < deg:
        work += [Fraction(0)] * (deg - len(work))
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            work[i] = Fraction(0)
            for j in range(deg):
                work[i - deg + j] -= c * phi[j]
    return tuple(work[:deg])


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _poly_divmod_frac(a, b):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    db = len(b) - 1
    q = [Fraction(0)] * max(1, len(a) - db)
    while len(a) - 1 >= db and any(c != 0 for c in a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - 1 - db
        f = a[-1] / b[-1]
        q[k] = f
        for i in range(db + 1):
            a[k + i] -= f * b[i]
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, (a or [Fraction(0)])


def _poly_mul_frac(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub_frac(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


# ----------------------------------------------------------------------
# abstract finite groups (for tables not tied to a field realization)
# ----------------------------------------------------------------------

class AbstractGroup:
    """Finite group from generator permutations; same table surface as GaloisGroup."""

    def __init__(self, generator_perms: Sequence[Sequence[int]]):
        npts = len(generator_perms[0])
        ident = tuple(range(npts))
        seen = {ident}
        frontier = [ident]
        gens = [tuple(p) for p in generator_perms]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(npts))
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        self.elements = sorted(seen)
        self._index = {p: i for i, p in enumerate(self.elements)}
        n = len(self.elements)
        self.order = n
        self.identity = self._index[ident]
        self.mult = [[0] * n for _ in range(n)]
        for i, p in enumerate(self.elements):
            for j, q in enumerate(self.elements):
                self.mult[i][j] = self._index[tuple(p[q[t]] for t in range(npts))]
        self.inverse = [0] * n
        for i in range(n):
            self.inverse[i] = next(j for j in range(n) if self.mult[i][j] == self.identity)
        self.class_of = self._conjugacy_classes()
        self.classes = sorted(set(self.class_of))
        self.class_members = {c: tuple(i for i in range(n) if self.class_of[i] == c) for c in self.classes}

    def _conjugacy_classes(self):
        n = self.order
        cls = [-1] * n
        for i in range(n):
            if cls[i] >= 0:
                continue
            orbit = {self.mult[self.mult[h][i]][self.inverse[h]] for h in range(n)}
            rep = min(orbit)
            for j in orbit:
                cls[j] = rep
        return cls

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != self.identity:
            cur = self.mult[cur][i]
            k += 1
        return k

    def power_class(self, cls_rep: int, k: int) -> int:
        cur = self.identity
        e = k % self.element_order(cls_rep)
        for _ in range(e):
            cur = self.mult[cur][cls_rep]
        return self.class_of[cur]


# ----------------------------------------------------------------------
# characters
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """Irreducible character: exact values per conjugacy-class representative.

    gamma_reps are residues j mod order such that zeta -> zeta^j induces the
    distinct embeddings of the character field E = Q(values) into Q(zeta_m);
    they enumerate Gal(E/Q).
    """

    name: str
    dim: int
    values: dict[int, CyclotomicNumber]
    gamma_reps: tuple[int, ...]

    def value(self, cls: int) -> CyclotomicNumber:
        return self.values[cls]

    def galois_twist(self, j: int) -> "Character":
        return Character(f"{self.name}^({j})", self.dim,
                         {c: v.galois(j) for c, v in self.values.items()},
                         self.gamma_reps)


class CharacterTable:
    """Rows of irreducible characters over a group's conjugacy classes."""

    def __init__(self, group, chars: Sequence[Character], order_m: int):
        self.group = group
        self.chars = list(chars)
        self.order_m = order_m
        self.by_name = {c.name: c for c in self.chars}

    def contragredient(self, chi: Character) -> Character:
        g = self.group
        vals = {c: chi.values[g.class_of[g.inverse[c]]] for c in chi.values}
        return Character(chi.name + "~", chi.dim, vals, chi.gamma_reps)

    def check_orthogonality(self) -> bool:
        g = self.group
        for c1 in self.chars:
            for c2 in self.chars:
                s = CyclotomicNumber.rational(self.order_m, 0)
                for cls in g.classes:
                    size = len(g.class_members[cls])
                    inv_cls = g.class_of[g.inverse[cls]]
                    s = s + size * (c1.values[cls] * c2.values[inv_cls])
                expected = g.order if c1 is c2 else 0
                if not s == CyclotomicNumber.rational(self.order_m, expected):
                    return False
        return True

    def gamma_orbit(self, chi: Character) -> list[Character]:
        """Orbit of chi under Gal(E/Q) acting on values."""
        return [chi.galois_twist(j) for j in chi.gamma_reps]


# ----------------------------------------------------------------------
# the coefficient table, vanishing classification, ranks
# ----------------------------------------------------------------------

def c_coefficient(chi_check_values: dict[int, CyclotomicNumber], group, tau: int,
                  sigma_prime_from_sigma: int | None, r: int = -1,
                  base_real: bool = True, via_conjugation: bool = False) -> CyclotomicNumber:
    """The coefficient c^chi_(sigma', sigma) given sigma' = g(sigma).

    chi_check_values are the contragredient's class values; tau is the
    conjugation element tau_sigma; sigma_prime_from_sigma is a group element
    g with sigma' = g(sigma) (None when no such g exists, giving 0).  The
    base_real=False branches implement the complex-base-point case split,
    unreachable for the rational base field but kept for completeness
    (via_conjugation selects the tau o g(sigma) row).
    """
    m = next(iter(chi_check_values.values())).order
    if sigma_prime_from_sigma is None:
        return CyclotomicNumber.rational(m, 0)
    g = sigma_prime_from_sigma
    cls = group.class_of
    if base_real:
        gtau = group.mult[g][tau]
        return chi_check_values[cls[g]] + (-1) ** (r % 2) * chi_check_values[cls[gtau]]
    if via_conjugation:
        return (-1) ** (r % 2) * chi_check_values[cls[g]]
    return chi_check_values[cls[g]]


@dataclass(frozen=True)
class VanishingClassification:
    kind: str                    # "order_zero" | "simple_zero"
    case: str                    # "i" | "ii" | "-"
    special_embeddings: tuple[int, ...]
    order_bound: int


def classify_vanishing(chi_values: dict[int, CyclotomicNumber], group,
                       tau_classes: dict[int, int], r: int = -1) -> VanishingClassification:
    """Order-of-vanishing classification for k = Q at odd negative r.

    tau_classes maps embedding index -> class of tau_sigma.  A simple zero
    needs chi(1) + (-1)^r chi(tau_sigma) = 2 at some embedding and 0 off the
    orbit of sigma; the special set collects embeddings achieving 2.
    """
    ident = group.class_of[group.identity]
    chi1 = chi_values[ident].to_fraction()
    sign = (-1) ** (r % 2)
    special = []
    bad = False
    for sigma, cls in tau_classes.items():
        val = chi1 + sign * chi_values[cls].to_fraction()
        if val == 2:
            special.append(sigma)
        elif val != 0:
            bad = True
    if special and not bad:
        return VanishingClassification("simple_zero", "ii", tuple(special), 1)
    if not special:
        return VanishingClassification("order_zero", "-", (), 0)
    return VanishingClassification("order_zero", "-", tuple(special), 2)


def k3_rank(signature: tuple[int, int], r: int) -> int:
    """Rank of K_(1-2r) of a field with the given signature, r < 0."""
    if r >= 0:
        raise ValueError("r must be strictly negative")
    r1, r2 = signature
    return r1 + r2 if r % 2 == 0 else r2


def w_r_chi(chi_dim: int, w2_fixed_field: int) -> int:
    """w_r(chi) = w_(1-r)(fixed field)^chi(1) for the shipped r = -1 case."""
    return w2_fixed_field ** chi_dim


def char_poly_from_power_sums(power_sums: Sequence[CyclotomicNumber], dim: int) -> list[CyclotomicNumber]:
    """Coefficients of det(1 - g T) from p_k = chi(g^k), via Newton's identities.

    Returns [c_0=1, c_1, ..., c_dim] with det(1 - gT) = sum c_k T^k, so
    c_k = (-1)^k e_k.
    """
    m = power_sums[0].order
    e = [CyclotomicNumber.rational(m, 1)]
    for k in range(1, dim + 1):
        s = CyclotomicNumber.rational(m, 0)
        for i in range(1, k + 1):
            s = s + (-1) ** (i - 1) * (e[k - i] * power_sums[i - 1])
        e.append(s * Fraction(1, k))
    return [(-1) ** k * e[k] for k in range(dim + 1)]


def euler_factor_multiplier(local_poly: Sequence[CyclotomicNumber], p: int, r: int) -> CyclotomicNumber:
    """det(1 - Frob_w Nv^-r | V^I) evaluated from the local polynomial at T = p^-r.

    Integral for r < 0; used to push verified elements from S_infinity to
    larger prime sets.
    """
    if r >= 0:
        raise ValueError("r must be strictly negative")
    T = Fraction(p) ** (-r)
    m = local_poly[0].order
    out = CyclotomicNumber.rational(m, 0)
    tk = Fraction(1)
    for c in local_poly:
        out = out + c * tk
        tk *= T
    return out
