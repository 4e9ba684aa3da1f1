"""The degree-2 K3 surface built from six seed quadrics.

A sextet (A, ..., F) of integer ternary quadratic forms determines the
bidegree-(2,2) hypersurface

    A y0^2 + B y0y1 + C y0y2 + D y1^2 + E y1y2 + F y2^2 = 0

and the double cover w^2 = f with branch sextic f = -(1/2) det M for
M = [[2A, B, C], [B, 2D, E], [C, E, 2F]].  The determinant structure makes f
integral.  Serialisation follows the fixed monomial order of
:func:`k3hasse.poly.monomials_of_degree`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .poly import TernaryForm

FORM_KEYS = ("A", "B", "C", "D", "E", "F")


@dataclass(frozen=True)
class QuadricSextet:
    A: TernaryForm
    B: TernaryForm
    C: TernaryForm
    D: TernaryForm
    E: TernaryForm
    F: TernaryForm

    def __post_init__(self):
        for key in FORM_KEYS:
            form = getattr(self, key)
            if form.degree != 2:
                raise ValueError(f"form {key} must have degree 2")

    def forms(self) -> tuple[TernaryForm, ...]:
        return tuple(getattr(self, key) for key in FORM_KEYS)

    @classmethod
    def from_coefficients(cls, rows) -> "QuadricSextet":
        """Six rows of six integers, each [x0^2, x0x1, x0x2, x1^2, x1x2, x2^2]."""
        rows = list(rows)
        if len(rows) != 6:
            raise ValueError("a sextet needs 6 quadratic forms")
        return cls(*(TernaryForm.from_coefficients(2, row) for row in rows))

    @classmethod
    def from_json(cls, text: str) -> "QuadricSextet":
        data = json.loads(text)
        return cls.from_coefficients(data[k] for k in FORM_KEYS)

    def to_json(self) -> str:
        return json.dumps(
            {k: [int(c) for c in getattr(self, k).coefficients()] for k in FORM_KEYS},
            indent=2,
        )

    def is_degenerate(self) -> bool:
        return any(form.is_zero() for form in self.forms())


@dataclass(frozen=True)
class K3Surface:
    """w^2 = branch_sextic in P(1,1,1,3), remembering the generating sextet."""

    branch_sextic: TernaryForm
    sextet: QuadricSextet


def build_k3(q: QuadricSextet) -> K3Surface:
    """The double cover branch sextic -(1/2) det M, exactly over Z."""
    A, B, C, D, E, F = q.forms()
    f = A * (E * E) + (B * B) * F + (C * C) * D - B * C * E - (A * D * F).scale(4)
    return K3Surface(branch_sextic=f, sextet=q)


def swap_projection(q: QuadricSextet) -> QuadricSextet:
    """Read the bidegree-(2,2) form with the roles of x and y exchanged.

    The 6x6 coefficient matrix (forms by monomials) transposes, so the
    operation is an involution.
    """
    matrix = [form.coefficients() for form in q.forms()]
    return QuadricSextet.from_coefficients(
        [[matrix[i][j] for i in range(6)] for j in range(6)]
    )


def bidegree_form(q: QuadricSextet) -> dict:
    """The (2,2) form as a map (x-monomial, y-monomial) -> coefficient."""
    from .poly import monomials_of_degree

    ymons = monomials_of_degree(2)
    out = {}
    for form, ymon in zip(q.forms(), ymons):
        for xmon, c in form.terms.items():
            out[(xmon, ymon)] = c
    return out


# ---------------------------------------------------------------------------
# Smoothness and the coefficient conditions controlling real/2-adic invariants
# ---------------------------------------------------------------------------

def is_smooth_curve(f: TernaryForm) -> bool:
    """Is the plane curve f = 0 smooth over the algebraic closure?

    Decided by the resultant-chain elimination of :mod:`k3hasse.badred`, over
    the coefficient field of f (Q for int or Fraction coefficients).
    """
    from .badred import singular_locus_nonempty

    if f.is_zero():
        raise ValueError("smoothness of the zero form")
    return not singular_locus_nonempty(f)


def _doubled_gram(form: TernaryForm) -> list[list[int]]:
    c = form.coefficients()
    return [
        [2 * c[0], c[1], c[2]],
        [c[1], 2 * c[3], c[4]],
        [c[2], c[4], 2 * c[5]],
    ]


def _leading_minors(m) -> tuple[int, int, int]:
    m1 = m[0][0]
    m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    m3 = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return m1, m2, m3


def is_positive_definite(form: TernaryForm) -> bool:
    m1, m2, m3 = _leading_minors(_doubled_gram(form))
    return m1 > 0 and m2 > 0 and m3 > 0


def is_negative_definite(form: TernaryForm) -> bool:
    m1, m2, m3 = _leading_minors(_doubled_gram(form))
    return m1 < 0 and m2 > 0 and m3 < 0


def check_real_conditions(q: QuadricSextet) -> bool:
    """A, D, F negative definite and B, C, E positive definite (exact signs of
    the leading principal minors of the doubled Gram matrices)."""
    return (
        is_negative_definite(q.A)
        and is_negative_definite(q.D)
        and is_negative_definite(q.F)
        and is_positive_definite(q.B)
        and is_positive_definite(q.C)
        and is_positive_definite(q.E)
    )


def _v2(n: int) -> float:
    if n == 0:
        return float("inf")
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def check_2adic_conditions(q: QuadricSextet) -> bool:
    """The six coefficient-wise congruence/valuation conditions that force the
    2-adic invariant of the quaternion class to vanish."""
    a = q.A.coefficients()
    b = q.B.coefficients()
    c = q.C.coefficients()
    d = q.D.coefficients()
    e = q.E.coefficients()
    f = q.F.coefficients()
    return (
        a[0] % 8 == 1
        and all(_v2(a[i]) >= 3 for i in (1, 2, 3, 4, 5))
        and _v2(b[0]) == 0
        and all(_v2(b[i]) >= 1 for i in (1, 2, 3, 4, 5))
        and _v2(c[5]) == 0
        and all(_v2(c[i]) >= 1 for i in (0, 1, 2, 3, 4))
        and d[3] % 8 == 1
        and all(_v2(d[i]) >= 3 for i in (0, 1, 2, 4, 5))
        and _v2(e[3]) == 0
        and all(_v2(e[i]) >= 1 for i in (0, 1, 2, 4, 5))
        and f[5] % 8 == 1
        and all(_v2(f[i]) >= 3 for i in (0, 1, 2, 3, 4))
    )


def reduce_mod(form: TernaryForm, field) -> TernaryForm:
    """Reduce an integer form into the given finite field."""
    return TernaryForm(
        form.degree, {m: field.from_int(c) for m, c in form.terms.items()}
    )


def to_rational(form: TernaryForm) -> TernaryForm:
    return form.map_coefficients(Fraction)
