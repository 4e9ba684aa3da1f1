"""Exact local computations over R and Q_p.

Everything is decided on exact rationals through valuations and unit residues;
no truncated p-adic numbers exist anywhere.  Local invariants live additively
in (1/2)Z/Z, represented as ``Fraction`` values 0 and 1/2, so the adelic sum
condition is a plain sum reduced mod 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import probable_prime

Invariant = Fraction
INV_ZERO = Fraction(0)
INV_HALF = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class Place:
    """R or Q_p; the real place sorts before the finite ones."""

    p: int  # 0 encodes the real place

    def __post_init__(self):
        if self.p != 0 and not probable_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def real(cls) -> "Place":
        return cls(0)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_real(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "R" if self.is_real else f"Q_{self.p}"


def invariant_sum(values) -> Invariant:
    """Sum in (1/2)Z/Z."""
    return sum(values, start=Fraction(0)) % 1


def padic_valuation(a: Fraction | int, p: int) -> tuple[int, Fraction]:
    """(v_p(a), unit part a / p^v) for nonzero rational a."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = a.numerator, a.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def _unit_residue(u: Fraction, modulus: int) -> int:
    """Residue of a p-adic unit written as a fraction with denominator prime
    to the modulus."""
    return u.numerator * pow(u.denominator, -1, modulus) % modulus


def padic_square(a: Fraction | int, p: int) -> bool:
    """Is a nonzero rational a square in Q_p?

    For p = 2: even valuation and unit part congruent to 1 mod 8.  For odd p:
    even valuation and unit part a square mod p.
    """
    a = Fraction(a)
    if a == 0:
        raise ValueError("padic_square of zero")
    v, u = padic_valuation(a, p)
    if v % 2:
        return False
    if p == 2:
        return _unit_residue(u, 8) == 1
    r = _unit_residue(u, p)
    return pow(r, (p - 1) // 2, p) == 1


def real_square(a: Fraction | int) -> bool:
    return Fraction(a) > 0


def _eps2(u: int) -> int:
    """(u - 1)/2 mod 2 for odd u."""
    return (u - 1) // 2 % 2


def _omega2(u: int) -> int:
    """(u^2 - 1)/8 mod 2 for odd u."""
    return (u * u - 1) // 8 % 2


def hilbert_symbol(a: Fraction | int, b: Fraction | int, place: Place) -> Invariant:
    """Local Hilbert symbol as an invariant in {0, 1/2}.

    0 iff z^2 = a x^2 + b y^2 has a nontrivial solution over the completion.
    Sign test at R, the tame formula at odd p, the epsilon/omega formula at 2.
    """
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol entries must be nonzero")
    if place.is_real:
        return INV_HALF if (a < 0 and b < 0) else INV_ZERO
    p = place.p
    alpha, u = padic_valuation(a, p)
    beta, v = padic_valuation(b, p)
    if p == 2:
        ru = _unit_residue(u, 8)
        rv = _unit_residue(v, 8)
        e = _eps2(ru) * _eps2(rv) + alpha * _omega2(rv) + beta * _omega2(ru)
        return INV_HALF if e % 2 else INV_ZERO
    lu = 0 if pow(_unit_residue(u, p), (p - 1) // 2, p) == 1 else 1
    lv = 0 if pow(_unit_residue(v, p), (p - 1) // 2, p) == 1 else 1
    e = alpha * beta * ((p - 1) // 2) + beta * lu + alpha * lv
    return INV_HALF if e % 2 else INV_ZERO
