"""Arithmetic in F_p and F_{p^n}: elements, characters, Frobenius orbits,
distinct-degree splitting and root finding in extensions.

Fields are immutable and cached; elements are lightweight wrappers so the
generic polynomial code in :mod:`k3hasse.poly` works over them unchanged.
Small fields (order <= 2^20) additionally carry numpy log/antilog and
digit-split addition tables; the point-counting kernel works on those raw
arrays directly.
"""

from __future__ import annotations

import functools
import random
from functools import cached_property

import numpy as np

from .arith import probable_prime, strip_small_factors
from .poly import UniPoly, poly_gcd, squarefree_decomposition

TABLE_LIMIT = 2**20


class FFElem:
    """Element of a finite field; payload is an int (prime field) or a
    tuple of base-field elements (extension field)."""

    __slots__ = ("field", "val")

    def __init__(self, field, val):
        self.field = field
        self.val = val

    def __bool__(self):
        return self.field._nonzero(self.val)

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field is other.field and self.val == other.val
        if isinstance(other, int):
            return self == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.val))

    def __repr__(self):
        return f"FF({self.field._fmt(self.val)} in GF({self.field.order}))"

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field is not self.field:
                raise TypeError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElem(self.field, self.field._add(self.val, o.val))

    __radd__ = __add__

    def __neg__(self):
        return FFElem(self.field, self.field._neg(self.val))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElem(self.field, self.field._add(self.val, self.field._neg(o.val)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElem(self.field, self.field._mul(self.val, o.val))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElem(self.field, self.field._mul(self.val, self.field._inv(o.val)))

    def __rtruediv__(self, other):
        return self.field.from_int(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return (self.field.one / self) ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result


class FiniteField:
    """Shared behaviour of prime and extension fields."""

    characteristic: int
    degree: int  # absolute degree over F_p
    order: int

    @cached_property
    def zero(self) -> FFElem:
        return self.from_int(0)

    @cached_property
    def one(self) -> FFElem:
        return self.from_int(1)

    def elem(self, val) -> FFElem:
        return FFElem(self, val)

    def frobenius(self, a: FFElem) -> FFElem:
        return a ** self.characteristic

    def element_degree(self, a: FFElem) -> int:
        """Degree over F_p of the subfield generated by a."""
        b = self.frobenius(a)
        e = 1
        while b != a:
            b = self.frobenius(b)
            e += 1
        return e

    def elements(self):
        """Iterate over all field elements (small fields only)."""
        if self.order > TABLE_LIMIT:
            raise ValueError("field too large to enumerate")
        return (self.decode(i) for i in range(self.order))


class PrimeField(FiniteField):
    def __init__(self, p: int):
        if p < 2 or not probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.degree = 1
        self.order = p

    def __repr__(self):
        return f"GF({self.p})"

    def from_int(self, k: int) -> FFElem:
        return FFElem(self, k % self.p)

    def random_element(self, rng) -> FFElem:
        return FFElem(self, rng.randrange(self.p))

    @cached_property
    def tables(self) -> "FieldTables":
        if self.order > TABLE_LIMIT:
            raise ValueError(f"field of order {self.order} exceeds the table limit")
        return FieldTables(self)

    @cached_property
    def modulus(self) -> UniPoly:
        return UniPoly([self.zero, self.one])

    def _fmt(self, val):
        return str(val)

    def _nonzero(self, val):
        return val != 0

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return -a % self.p

    def _mul(self, a, b):
        return a * b % self.p

    def _inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def encode(self, a: FFElem) -> int:
        return a.val

    def decode(self, k: int) -> FFElem:
        return FFElem(self, k % self.p)


class ExtensionField(FiniteField):
    """F_q[t]/(modulus) over an arbitrary base finite field."""

    def __init__(self, base: FiniteField, modulus: UniPoly):
        if modulus.degree < 1:
            raise ValueError("modulus must have positive degree")
        self.base = base
        self.modulus = modulus.monic()
        self.rel_degree = modulus.degree
        self.characteristic = base.characteristic
        self.degree = base.degree * self.rel_degree
        self.order = base.order ** self.rel_degree
        self._modlist = list(self.modulus.coeffs)

    def __repr__(self):
        return f"GF({self.characteristic}^{self.degree})"

    def _pad(self, coeffs) -> tuple:
        n = self.rel_degree
        cs = list(coeffs)[:n]
        cs += [self.base.zero] * (n - len(cs))
        return tuple(cs)

    def from_int(self, k: int) -> FFElem:
        return FFElem(self, self._pad([self.base.from_int(k)]))

    def from_base(self, a: FFElem) -> FFElem:
        return FFElem(self, self._pad([a]))

    def from_poly(self, poly: UniPoly) -> FFElem:
        return FFElem(self, self._pad((poly % self.modulus).coeffs))

    def random_element(self, rng) -> FFElem:
        return FFElem(self, tuple(self.base.random_element(rng) for _ in range(self.rel_degree)))

    @cached_property
    def gen(self) -> FFElem:
        """The class of t."""
        return FFElem(self, self._pad([self.base.zero, self.base.one]))

    def to_poly(self, a: FFElem) -> UniPoly:
        return UniPoly(a.val)

    def _fmt(self, val):
        return "[" + ", ".join(self.base._fmt(c.val) for c in val) + "]"

    def _nonzero(self, val):
        return any(val)

    def _add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(-x for x in a)

    def _mul(self, a, b):
        n = self.rel_degree
        zero = self.base.zero
        out = [zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        mod = self._modlist
        for i in range(len(out) - 1, n - 1, -1):
            c = out[i]
            if c:
                for j in range(n):
                    out[i - n + j] = out[i - n + j] - c * mod[j]
                out[i] = zero
        return tuple(out[:n])

    def _inv(self, a):
        poly = UniPoly(a)
        if poly.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: find u with u * poly = 1 mod modulus
        r0, r1 = self.modulus, poly
        s0, s1 = UniPoly(), UniPoly.const(self.base.one)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        # r0 = gcd, a unit in the base field
        inv_lc = self.base.one / r0.lc
        return self._pad([c * inv_lc for c in s0.coeffs])

    def encode(self, a: FFElem) -> int:
        """Base-p digit encoding (prime base fields only)."""
        x = 0
        for c in reversed(a.val):
            x = x * self.base.order + self.base.encode(c)
        return x

    def decode(self, k: int) -> FFElem:
        digits = []
        for _ in range(self.rel_degree):
            digits.append(self.base.decode(k % self.base.order))
            k //= self.base.order
        return FFElem(self, tuple(digits))

    # -- numpy tables for the counting kernel (prime base, order <= 2^20) ----

    @cached_property
    def tables(self) -> "FieldTables":
        if self.order > TABLE_LIMIT:
            raise ValueError(f"field of order {self.order} exceeds the table limit")
        if not isinstance(self.base, PrimeField):
            raise ValueError("tables require a prime base field")
        return FieldTables(self)


class FieldTables:
    """Log/antilog, digit-split addition, Frobenius and exact-degree tables
    for a small field, int-encoded.

    Prime fields skip the addition tables (plain mod-p arithmetic is faster
    and a p-by-p table would not fit for table-limit-sized p).
    """

    def __init__(self, field: FiniteField):
        p = field.characteristic
        q = field.order
        n = field.degree
        self.field = field
        self.p, self.q, self.n = p, q, n
        gen = _find_generator(field)
        exp = np.zeros(q - 1, dtype=np.int64)
        cur = field.one
        for k in range(q - 1):
            exp[k] = field.encode(cur)
            cur = cur * gen
        self.exp = exp
        self.generator = gen
        log0 = np.full(q, 2 * (q - 1), dtype=np.int64)
        log0[exp] = np.arange(q - 1)
        self.log0 = log0
        expext = np.zeros(4 * (q - 1) + 4, dtype=np.int64)
        expext[: q - 1] = exp
        expext[q - 1 : 2 * (q - 1)] = exp
        self.expext = expext
        if n == 1:
            self.h = 0
            self.addt = None
        else:
            hd = (n + 1) // 2
            h = p**hd
            self.h = h
            digits = np.arange(h)
            expanded = np.zeros((hd, h), dtype=np.int64)
            rest = digits.copy()
            for i in range(hd):
                expanded[i] = rest % p
                rest //= p
            addt = np.zeros((h, h), dtype=np.int64)
            weights = p ** np.arange(hd)
            for a in range(h):
                addt[a] = ((expanded[:, a][:, None] + expanded) % p * weights[:, None]).sum(axis=0)
            self.addt = addt
        ar = np.arange(q)
        frob = np.zeros(q, dtype=np.int64)
        nz = ar != 0
        frob[nz] = exp[(log0[ar[nz]] * p) % (q - 1)]
        self.frob = frob
        deg = np.zeros(q, dtype=np.int64)
        cur_map = frob.copy()
        remaining = np.ones(q, dtype=bool)
        for e in range(1, n + 1):
            fixed = (cur_map == ar) & remaining
            deg[fixed] = e
            remaining &= ~fixed
            cur_map = frob[cur_map]
        if remaining.any():
            raise AssertionError("Frobenius orbit computation failed")
        self.deg = deg

    def vmul(self, u, v):
        return self.expext[self.log0[u] + self.log0[v]]

    def vadd(self, u, v):
        if self.addt is None:
            return (u + v) % self.p
        h = self.h
        return self.addt[u % h, v % h] + h * self.addt[u // h, v // h]

    def smul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(int(self.log0[a]) + int(self.log0[b])) % (self.q - 1)])

    def sadd(self, a: int, b: int) -> int:
        if self.addt is None:
            return (a + b) % self.p
        h = self.h
        return int(self.addt[a % h, b % h]) + h * int(self.addt[a // h, b // h])

    def orbit_reps(self):
        """(representative, orbit size) for the Frobenius orbits, the
        representative being the minimal int encoding in its orbit."""
        q = self.q
        ar = np.arange(q)
        orbmin = ar.copy()
        cur = self.frob.copy()
        for _ in range(self.n):
            orbmin = np.minimum(orbmin, cur)
            cur = self.frob[cur]
        reps = np.nonzero(orbmin == ar)[0]
        return [(int(r), int(self.deg[r])) for r in reps]


def _find_generator(field: ExtensionField) -> FFElem:
    q = field.order
    factors, cofactor = strip_small_factors(q - 1, bound=1 << 20)
    if cofactor != 1:
        raise ValueError("cannot factor group order")
    primes = [f for f, _ in factors]
    for k in range(2, q):
        g = field.decode(k)
        if not g:
            continue
        if all((g ** ((q - 1) // l)) != field.one for l in primes):
            return g
    raise AssertionError("no generator found")


# ---------------------------------------------------------------------------
# Canonical fields
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


def is_irreducible(f: UniPoly, field: FiniteField) -> bool:
    """Rabin irreducibility test over the coefficient field."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    q = field.order
    x = UniPoly([field.zero, field.one])
    xq = x
    for _ in range(n):
        xq = xq.powmod(q, f)
    if xq != x % f:
        return False
    for l in sorted({l for l, _ in strip_small_factors(n)[0]}):
        e = n // l
        xe = x
        for _ in range(e):
            xe = xe.powmod(q, f)
        if poly_gcd(xe - x, f).degree != 0:
            return False
    return True


@functools.lru_cache(maxsize=None)
def fq(p: int, n: int) -> FiniteField:
    """The canonical field with p^n elements.

    The modulus is the first monic irreducible of degree n in the enumeration
    of coefficient vectors (c_0, ..., c_{n-1}) as base-p digits, so fields are
    reproducible across runs.
    """
    base = prime_field(p)
    if n == 1:
        return base
    for k in range(p**n):
        digits = []
        kk = k
        for _ in range(n):
            digits.append(base.from_int(kk % p))
            kk //= p
        cand = UniPoly(digits + [base.one])
        if cand.degree == n and is_irreducible(cand, base):
            return ExtensionField(base, cand)
    raise AssertionError("no irreducible modulus found")


def make_field(p: int, n: int) -> FiniteField:
    """Construct F_{p^n} with the deterministic modulus choice."""
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if not probable_prime(p):
        raise ValueError(f"{p} is not prime")
    return fq(p, n)


def quadratic_character(a: FFElem) -> int:
    """0 for zero, +1 for nonzero squares, -1 for nonsquares (odd q)."""
    field = a.field
    if field.characteristic == 2:
        raise ValueError("quadratic character needs odd characteristic")
    if not a:
        return 0
    return 1 if a ** ((field.order - 1) // 2) == field.one else -1


# ---------------------------------------------------------------------------
# Factoring machinery over finite fields
# ---------------------------------------------------------------------------

def distinct_degree_factorization(g: UniPoly, field: FiniteField) -> list[tuple[UniPoly, int]]:
    """Split a monic squarefree g into (product of its irreducible factors of
    degree d, d) pairs."""
    out = []
    rem = g.monic()
    q = field.order
    x = UniPoly([field.zero, field.one])
    h = x % rem
    d = 0
    while rem.degree > 0 and rem.degree > 2 * d:
        d += 1
        h = h.powmod(q, rem)
        fac = poly_gcd(h - x, rem)
        if fac.degree > 0:
            out.append((fac, d))
            rem = rem.exact_div(fac)
            h = h % rem
    if rem.degree > 0:
        out.append((rem, rem.degree))
    return out


def equal_degree_factorization(g: UniPoly, d: int, field: FiniteField, rng=None) -> list[UniPoly]:
    """Cantor-Zassenhaus split of a monic squarefree g all of whose irreducible
    factors have degree d (odd characteristic)."""
    if g.degree == d:
        return [g.monic()]
    if rng is None:
        # deterministic per (field, degree profile) so factor splits reproduce
        rng = random.Random((field.characteristic % (1 << 30)) * 1009 + field.degree * 31 + g.degree)
    q = field.order
    e = (q**d - 1) // 2
    while True:
        r = UniPoly([field.random_element(rng) for _ in range(g.degree)])
        if r.degree < 1:
            continue
        s = r.powmod(e, g) - UniPoly.const(field.one)
        fac = poly_gcd(s, g)
        if 0 < fac.degree < g.degree:
            return (equal_degree_factorization(fac, d, field, rng)
                    + equal_degree_factorization(g.exact_div(fac), d, field, rng))


def irreducible_factors(g: UniPoly, field: FiniteField) -> list[tuple[UniPoly, int]]:
    """Monic irreducible factors with multiplicities."""
    out = []
    for sqfree, mult in squarefree_decomposition(g):
        for fac, d in distinct_degree_factorization(sqfree, field):
            for irr in equal_degree_factorization(fac, d, field):
                out.append((irr, mult))
    return out


def roots_in_extensions(g: UniPoly, field: FiniteField, max_degree: int):
    """All roots of g in F_{q^e} for e <= max_degree, over the given base.

    Returns (root, exact_degree, multiplicity) triples; ``exact_degree`` is
    the absolute degree of the root over the prime field, and conjugate roots
    are listed individually (inside an extension field whose modulus is the
    root's minimal polynomial over the base).
    """
    if g.is_zero():
        raise ValueError("root finding on the zero polynomial")
    out = []
    for irr, mult in irreducible_factors(g, field):
        e = irr.degree
        if e > max_degree:
            continue
        if e == 1:
            root = -irr.coeffs[0]
            out.append((root, field.element_degree(root), mult))
            continue
        ext = ExtensionField(field, irr)
        root = ext.gen
        for _ in range(e):
            out.append((root, ext.element_degree(root), mult))
            root = ext.frobenius(root)
    return out
