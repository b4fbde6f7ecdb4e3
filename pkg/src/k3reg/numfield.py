"""Exact arithmetic in F = Q[x]/(f), embeddings, automorphisms and Galois data.

Elements are rational vectors on the power basis of the class of x; all
arithmetic is exact (Fractions), embeddings are mpmath complex numbers at an
explicit PrecisionContext.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import mp

from k3reg.mpnum import (
    PrecisionContext,
    PrecisionError,
    RootData,
    complex_roots,
    is_squarefree,
    poly_divmod,
    recognize_algebraic,
    _to_fraction_poly,
)


class FieldError(ValueError):
    pass


def _factor_degrees_mod_p(coeffs: list[int], p: int) -> list[int] | None:
    """Degrees of the distinct-degree splitting of a monic integer poly mod p.

    Returns None when f mod p is not squarefree (or drops degree).
    """
    f = [c % p for c in coeffs]
    if f[-1] % p == 0:
        return None

    def pmul(a, b, mod):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return _pmod(out, mod)

    def _pmod(a, mod):
        a = a[:]
        dm = len(mod) - 1
        inv = pow(mod[-1], -1, p)
        for i in range(len(a) - 1, dm - 1, -1):
            c = a[i] * inv % p
            if c:
                for j in range(dm + 1):
                    a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        return a

    def pgcd(a, b):
        a, b = a[:], b[:]
        while not (len(b) == 1 and b[0] == 0):
            a, b = b, _pmod(a, b)
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        return a

    # squarefree check mod p
    df = [(i * f[i]) % p for i in range(1, len(f))]
    while len(df) > 1 and df[-1] == 0:
        df.pop()
    if len(pgcd(f[:], df)) > 1:
        return None
    degrees = []
    v = [0, 1]  # x
    g = f[:]
    d = 0
    while len(g) > 1:
        d += 1
        # v = x^(p^d) mod g by repeated powering
        v = _pmod(v, g)
        v = _pow_mod(v, p, g, p, pmul)
        h = v[:]
        if len(h) < 2:
            h = h + [0]
        h[1] = (h[1] - 1) % p
        while len(h) > 1 and h[-1] == 0:
            h.pop()
        gc = pgcd(g[:], h)
        if len(gc) > 1:
            deg = len(gc) - 1
            for _ in range(deg // d):
                degrees.append(d)
            g, _r = _pdiv(g, gc, p)
        if len(g) - 1 < 2 * (d + 1):
            if len(g) > 1:
                degrees.append(len(g) - 1)
            break
    return sorted(degrees)


def _pow_mod(base, e, mod, p, pmul):
    out = [1]
    b = base[:]
    while e:
        if e & 1:
            out = pmul(out, b, mod)
        b = pmul(b, b, mod)
        e >>= 1
    return out


def _pdiv(a, b, p):
    a = a[:]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(1, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, a


def probable_irreducible(coeffs: Sequence[int], primes: Iterable[int] = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)) -> bool:
    """Certify irreducibility over Q by intersecting factor patterns mod p.

    Any rational factor degree must be a subset sum of the mod-p degree
    pattern for every good prime; if the intersection of achievable sums is
    {0, n}, f is irreducible.
    """
    n = len(coeffs) - 1
    possible = set(range(n + 1))
    for p in primes:
        pat = _factor_degrees_mod_p([int(c) for c in coeffs], p)
        if pat is None:
            continue
        sums = {0}
        for d in pat:
            sums |= {s + d for s in sums}
        possible &= sums
        if possible == {0, n}:
            return True
    return False


def _irreducible_by_root_subsets(coeffs: Sequence[int], ctx: PrecisionContext) -> bool:
    """Complete irreducibility test for monic integer polynomials.

    A monic factor over Q has integer coefficients (Gauss), so some subset of
    roots would have all elementary symmetric functions near integers; scan
    all subsets up to degree n/2 and verify candidates by exact division.
    """
    from itertools import combinations

    n = len(coeffs) - 1
    rd = complex_roots(coeffs, ctx)
    with ctx.workprec():
        tol = mp.mpf(10) ** (-(ctx.working_digits // 2))
        for k in range(1, n // 2 + 1):
            for idx in combinations(range(n), k):
                s = sum(rd.roots[i] for i in idx)
                if abs(mp.im(s)) > tol or abs(s - mp.nint(mp.re(s))) > tol:
                    continue
                # candidate factor: expand prod (x - root_i), all coeffs near ints
                fac = [mp.mpc(1)]
                for i in idx:
                    r = rd.roots[i]
                    new = [mp.mpc(0)] * (len(fac) + 1)
                    for j, c in enumerate(fac):
                        new[j + 1] += c
                        new[j] -= r * c
                    fac = new
                if any(abs(c - mp.nint(mp.re(c))) > tol for c in fac):
                    continue
                cand = [Fraction(int(mp.nint(mp.re(c)))) for c in fac]
                _q, r = poly_divmod(_to_fraction_poly(coeffs), cand)
                if all(c == 0 for c in r):
                    return False
        return True


@dataclass(frozen=True)
class FieldElement:
    """Element of Q[x]/(f) on the power basis; immutable and hashable."""

    field: "NumberField"
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.degree:
            raise FieldError("coefficient vector has wrong length")

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        other = self.field.element(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self.field.element(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self.field.element(other).__sub__(self)

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self.field.element(other)
        return FieldElement(self.field, self.field._mul_vec(self.coeffs, other.coeffs))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = self.field.element(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field.element(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        b = self
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def inverse(self) -> "FieldElement":
        return self.field.inverse(self)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __eq__(self, other):
        return isinstance(other, FieldElement) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"FieldElement({list(map(str, self.coeffs))})"

    # -- numerics ---------------------------------------------------------
    def embed(self, sigma: int, ctx: PrecisionContext):
        return self.field.embed(self, sigma, ctx)

    def norm(self) -> Fraction:
        return self.field.norm(self)

    def trace(self) -> Fraction:
        return self.field.trace(self)


class NumberField:
    """Q[x]/(f) for a monic irreducible integer polynomial f."""

    def __init__(self, coeffs: Sequence, label: str = "F", check_irreducible: bool = True):
        poly = _to_fraction_poly(coeffs)
        if poly[-1] != 1:
            raise FieldError("defining polynomial must be monic")
        if any(c.denominator != 1 for c in poly):
            raise FieldError("defining polynomial must have integer coefficients")
        if not is_squarefree(poly):
            raise FieldError("defining polynomial is not squarefree")
        self.poly = tuple(poly)
        self.poly_int = [int(c) for c in poly]
        self.degree = len(poly) - 1
        self.label = label
        if check_irreducible and self.degree > 1 and not probable_irreducible(self.poly_int):
            if not _irreducible_by_root_subsets(self.poly_int, PrecisionContext(60, 15)):
                raise FieldError("defining polynomial is reducible over Q")
        # reduction rows: x^(n+k) mod f as integer vectors (f monic integral)
        n = self.degree
        rows = []
        cur = [-c for c in self.poly_int[:n]]
        rows.append(cur[:])
        for _ in range(n - 2):
            cur = [0] + cur
            lead = cur.pop()
            if lead:
                cur = [c + lead * r for c, r in zip(cur, rows[0])]
            rows.append(cur[:])
        self._red_rows = rows
        self._embeddings: dict[int, RootData] = {}

    # -- construction ----------------------------------------------------
    def element(self, val) -> FieldElement:
        if isinstance(val, FieldElement):
            if val.field is not self:
                raise FieldError("element belongs to a different field")
            return val
        if isinstance(val, (int, Fraction)):
            v = [Fraction(val)] + [Fraction(0)] * (self.degree - 1)
            return FieldElement(self, tuple(v))
        v = [Fraction(c) for c in val]
        if len(v) < self.degree:
            v += [Fraction(0)] * (self.degree - len(v))
        if len(v) > self.degree:
            raise FieldError("coefficient vector too long")
        return FieldElement(self, tuple(v))

    def zero(self) -> FieldElement:
        return self.element(0)

    def one(self) -> FieldElement:
        return self.element(1)

    def gen(self) -> FieldElement:
        return self.element([0, 1])

    # -- arithmetic core ---------------------------------------------------
    def _mul_vec(self, a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        # integer convolution over the common denominators
        n = self.degree
        da = _lcm_list([c.denominator for c in a])
        db = _lcm_list([c.denominator for c in b])
        na = [int(c * da) for c in a]
        nb = [int(c * db) for c in b]
        conv = [0] * (2 * n - 1)
        for i, x in enumerate(na):
            if x:
                for j, y in enumerate(nb):
                    conv[i + j] += x * y
        for k in range(2 * n - 2, n - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                row = self._red_rows[k - n]
                for j in range(n):
                    conv[j] += c * row[j]
        den = da * db
        return tuple(Fraction(conv[j], den) for j in range(n))

    def inverse(self, x: FieldElement) -> FieldElement:
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid in Q[x]: u*xpoly + v*f = 1
        a = list(self.poly)
        b = list(x.coeffs)
        while len(b) > 1 and b[-1] == 0:
            b.pop()
        s_prev, s_cur = [Fraction(0)], [Fraction(1)]
        while True:
            q, r = poly_divmod(a, b)
            r = _to_fraction_poly(r)
            if len(r) == 1 and r[0] == 0:
                break
            s_next = _poly_sub(s_prev, _poly_mul(q, s_cur))
            a, b = b, r
            s_prev, s_cur = s_cur, s_next
        if len(b) != 1 or b[0] == 0:
            raise FieldError("element is a zero divisor; polynomial not irreducible?")
        inv_lead = 1 / b[0]
        s_cur = [c * inv_lead for c in s_cur]
        _, rem = poly_divmod(s_cur, list(self.poly))
        return self.element(rem)

    def mul_matrix(self, x: FieldElement) -> list[list[Fraction]]:
        """Matrix of multiplication by x on the power basis (columns = x*a^j)."""
        n = self.degree
        cols = []
        cur = x.coeffs
        cols.append(cur)
        for _ in range(n - 1):
            cur = self._mul_vec(cur, self.gen().coeffs)
            cols.append(cur)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self, x: FieldElement) -> Fraction:
        return _det_fraction(self.mul_matrix(x))

    def trace(self, x: FieldElement) -> Fraction:
        M = self.mul_matrix(x)
        return sum(M[i][i] for i in range(self.degree))

    def charpoly(self, x: FieldElement) -> list[Fraction]:
        """Characteristic polynomial of multiplication by x (ascending)."""
        M = self.mul_matrix(x)
        return _charpoly_fraction(M)

    # -- embeddings --------------------------------------------------------
    def embeddings(self, ctx: PrecisionContext) -> RootData:
        rd = self._embeddings.get(ctx.dps)
        if rd is None:
            rd = complex_roots(self.poly, ctx)
            self._embeddings[ctx.dps] = rd
        return rd

    @property
    def signature(self) -> tuple[int, int]:
        if self._embeddings:
            return self._embeddings[max(self._embeddings)].signature
        return self.embeddings(PrecisionContext(30, 10)).signature

    def embed(self, x: FieldElement, sigma: int, ctx: PrecisionContext):
        rd = self.embeddings(ctx)
        with ctx.workprec():
            r = rd.roots[sigma]
            acc = mp.mpc(0)
            for c in reversed(x.coeffs):
                acc = acc * r
                if c:
                    acc += mp.mpf(c.numerator) / c.denominator
            return acc

    def select_embedding(self, approx, ctx: PrecisionContext) -> int:
        """Index of the embedding with sigma(a) nearest to the given value."""
        rd = self.embeddings(ctx)
        with ctx.workprec():
            z = mp.mpc(approx)
            dists = [abs(r - z) for r in rd.roots]
            best = min(range(len(dists)), key=lambda i: dists[i])
            rest = sorted(dists)
            if len(rest) > 1 and rest[1] < 2 * rest[0]:
                raise FieldError("embedding selector does not resolve a unique root")
            return best

    def __repr__(self):
        return f"NumberField({self.label}, degree={self.degree})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm_list(xs):
    out = 1
    for x in xs:
        out = out * x // _gcd(out, x)
    return out


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _det_fraction(M: list[list[Fraction]]) -> Fraction:
    """Determinant by fraction-free Bareiss on the integer-scaled matrix."""
    n = len(M)
    den = _lcm_list([c.denominator for row in M for c in row])
    A = [[int(c * den) for c in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return Fraction(0)
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return Fraction(sign * A[n - 1][n - 1], den ** n)


def _charpoly_fraction(M: list[list[Fraction]]) -> list[Fraction]:
    """char(M)(x) = det(xI - M), ascending, via Faddeev-LeVerrier."""
    n = len(M)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [row[:] for row in M]
    c = -_trace(Mk)
    coeffs[n - 1] = c
    B = [row[:] for row in Mk]
    for k in range(2, n + 1):
        for i in range(n):
            B[i][i] += coeffs[n - k + 1]
        B = _matmul_fraction(M, B)
        c = -_trace(B) / k
        coeffs[n - k] = c
    return coeffs


def _trace(M):
    return sum(M[i][i] for i in range(len(M)))


def _matmul_fraction(A, B):
    n = len(A)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            a = A[i][k]
            if a:
                for j in range(n):
                    out[i][j] += a * B[k][j]
    return out


# ----------------------------------------------------------------------
# automorphisms and Galois groups
# ----------------------------------------------------------------------

class Automorphism:
    """Field automorphism determined by the image of the power-basis generator."""

    def __init__(self, field: NumberField, image, check: bool = True):
        self.field = field
        self.image = field.element(image)
        if check:
            val = _eval_poly_at_element(field.poly, self.image)
            if not val.is_zero():
                raise FieldError("f(g(a)) != 0: not an automorphism")
        self._powers: list[FieldElement] | None = None

    def _power_table(self) -> list[FieldElement]:
        if self._powers is None:
            n = self.field.degree
            pws = [self.field.one()]
            for _ in range(n - 1):
                pws.append(pws[-1] * self.image)
            self._powers = pws
        return self._powers

    def __call__(self, x: FieldElement) -> FieldElement:
        pws = self._power_table()
        out = self.field.zero()
        for c, p in zip(x.coeffs, pws):
            if c:
                out = out + p * c
        return out

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other: (self*other)(x) = self(other(x))."""
        out = Automorphism(self.field, self(other.image), check=False)
        return out

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.image == other.image

    def __hash__(self):
        return hash(self.image.coeffs)

    def __repr__(self):
        return f"Automorphism({list(map(str, self.image.coeffs))})"


def _eval_poly_at_element(poly: Sequence[Fraction], x: FieldElement) -> FieldElement:
    out = x.field.zero()
    for c in reversed(list(poly)):
        out = out * x
        if c:
            out = out + x.field.element(c)
    return out


class GaloisGroup:
    """Closure of verified automorphisms with multiplication/action tables."""

    def __init__(self, field: NumberField, elements: list[Automorphism]):
        self.field = field
        self.elements = list(elements)
        self._index = {g.image.coeffs: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        self.order = n
        gen = field.gen()
        self.identity = next(i for i, g in enumerate(self.elements) if g.image == gen)
        self.mult = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                img = self.elements[i](self.elements[j].image)
                self.mult[i][j] = self._index[img.coeffs]
        self.inverse = [0] * n
        for i in range(n):
            self.inverse[i] = next(j for j in range(n) if self.mult[i][j] == self.identity)
        self.class_of = self._conjugacy_classes()
        self.classes = sorted(set(self.class_of))
        self.class_members = {c: tuple(i for i in range(n) if self.class_of[i] == c) for c in self.classes}
        self._action_cache: dict[int, list[list[int]]] = {}

    def _conjugacy_classes(self) -> list[int]:
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
        g = cls_rep
        cur = self.identity
        for _ in range(k % self.element_order(g) if k >= 0 else 0):
            cur = self.mult[cur][g]
        if k < 0:
            cur = self.identity
            for _ in range((-k) % self.element_order(g)):
                cur = self.mult[cur][g]
            cur = self.inverse[cur]
        return self.class_of[cur]

    # -- embedding action --------------------------------------------------
    def embedding_compose(self, ctx: PrecisionContext) -> list[list[int]]:
        """Table T[g][sigma] = index of the embedding sigma o g."""
        tab = self._action_cache.get(ctx.dps)
        if tab is not None:
            return tab
        rd = self.field.embeddings(ctx)
        n_emb = rd.degree
        with ctx.workprec():
            sep = min(abs(rd.roots[i] - rd.roots[j])
                      for i in range(n_emb) for j in range(i + 1, n_emb))
            tab = []
            for g in self.elements:
                row = []
                for s in range(n_emb):
                    val = self.field.embed(g.image, s, ctx)  # (sigma o g)(a) = sigma(g(a))
                    dists = [abs(val - r) for r in rd.roots]
                    best = min(range(n_emb), key=lambda i: dists[i])
                    if dists[best] > sep / 4:
                        raise PrecisionError("embedding action did not resolve; raise precision")
                    row.append(best)
                tab.append(row)
        self._action_cache[ctx.dps] = tab
        return tab

    def act_on_embedding(self, g: int, sigma: int, ctx: PrecisionContext) -> int:
        """g(sigma) = sigma o g^(-1), the left action used for coefficients."""
        return self.embedding_compose(ctx)[self.inverse[g]][sigma]


def group_closure(generators: Sequence[Automorphism], expected_order: int) -> GaloisGroup:
    """BFS closure of verified automorphisms; errors if it exceeds expected_order."""
    if not generators:
        raise FieldError("need at least one generator")
    field = generators[0].field
    seen = {field.gen().coeffs: Automorphism(field, field.gen(), check=False)}
    frontier = list(generators)
    for g in generators:
        seen.setdefault(g.image.coeffs, g)
    while frontier:
        nxt = []
        for g in frontier:
            for h in list(seen.values()):
                for prod in (g.compose(h), h.compose(g)):
                    if prod.image.coeffs not in seen:
                        seen[prod.image.coeffs] = prod
                        nxt.append(prod)
                        if len(seen) > expected_order:
                            raise FieldError("group closure exceeds the expected order")
        frontier = nxt
    if len(seen) != expected_order:
        raise FieldError(f"closure has order {len(seen)}, expected {expected_order}")
    elements = sorted(seen.values(), key=lambda g: tuple((c.numerator, c.denominator) for c in g.image.coeffs))
    return GaloisGroup(field, elements)


def tau_sigma(G: GaloisGroup, sigma: int, ctx: PrecisionContext) -> int:
    """Index of the complex-conjugation element attached to embedding sigma.

    For a real embedding this is the identity; otherwise the unique g with
    sigma(g(x)) = conj(sigma(x)) for all x, verified exactly via g^2 = id.
    """
    rd = G.field.embeddings(ctx)
    if rd.conjugate_index[sigma] == sigma:
        return G.identity
    tab = G.embedding_compose(ctx)
    target = rd.conjugate_index[sigma]
    found = [g for g in range(G.order) if tab[g][sigma] == target]
    if len(found) != 1:
        raise PrecisionError("tau_sigma not resolved at this precision")
    g = found[0]
    if G.mult[g][g] != G.identity:
        raise FieldError("conjugation candidate does not square to identity")
    return g


def minpoly_root_in_field(g_coeffs: Sequence, F: NumberField, ctx: PrecisionContext) -> FieldElement | None:
    """A root in F of an irreducible rational polynomial g, or None.

    Roots are located numerically in one embedding, reconstructed over the
    power basis by integer-relation detection and then verified exactly.
    """
    g = _to_fraction_poly(g_coeffs)
    deg = len(g) - 1
    if deg == 1:
        return F.element(-g[0] / g[1])
    if F.degree % deg != 0:
        return None
    work = ctx
    for _ in range(2):
        rd = F.embeddings(work)
        sigma = 0
        groots = complex_roots(g, work)
        with work.workprec():
            basis = [F.embed(F.element([0] * k + [1]), sigma, work) for k in range(F.degree)]
            saw_precision_issue = False
            for rho in groots.roots:
                try:
                    rec = recognize_algebraic(rho, basis, work, height_bound=10 ** (work.working_digits // 3))
                except PrecisionError:
                    saw_precision_issue = True
                    continue
                if rec is None:
                    continue
                cand = F.element(rec[0])
                if _eval_poly_at_element(g, cand).is_zero():
                    return cand
        if not saw_precision_issue:
            return None
        work = work.double()
    raise PrecisionError("cannot decide root membership at this precision")
