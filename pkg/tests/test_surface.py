import random

import pytest

from k3hasse.brauer import minors, sample_local_points
from k3hasse.finitefield import prime_field
from k3hasse.localfield import Place
from k3hasse.poly import TernaryForm
from k3hasse.surface import (
    QuadricSextet,
    build_k3,
    check_2adic_conditions,
    check_real_conditions,
    is_smooth_curve,
    reduce_mod,
    swap_projection,
)


def _random_sextet(rng, lo=-9, hi=9):
    return QuadricSextet.from_coefficients(
        [[rng.randrange(lo, hi + 1) for _ in range(6)] for _ in range(6)]
    )


def _zero_sextet():
    zero = TernaryForm(2, {})
    return QuadricSextet(zero, zero, zero, zero, zero, zero)


def test_build_k3_example_value(example_surface):
    assert example_surface.branch_sextic.evaluate((0, 0, -1)) == 57872
    assert example_surface.branch_sextic.degree == 6
    assert all(isinstance(c, int) for c in example_surface.branch_sextic.terms.values())


def test_build_k3_zero_and_diagonal():
    assert build_k3(_zero_sextet()).branch_sextic.is_zero()
    rng = random.Random(1)
    q = _random_sextet(rng)
    zero = TernaryForm(2, {})
    diag = QuadricSextet(q.A, zero, zero, q.D, zero, q.F)
    expected = (q.A * q.D * q.F).scale(-4)
    assert build_k3(diag).branch_sextic == expected


def _det_by_permutations(q):
    """-(1/2) det M via the 6-term permutation expansion; independent of the
    expansion used by build_k3."""
    A, B, C, D, E, F = q.forms()
    m = [[A.scale(2), B, C], [B, D.scale(2), E], [C, E, F.scale(2)]]
    total = None
    for perm, sign in (
        ((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
        ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1),
    ):
        term = m[0][perm[0]] * m[1][perm[1]] * m[2][perm[2]]
        term = term.scale(sign)
        total = term if total is None else total + term
    # total = det(M); every coefficient is even by the doubled-diagonal shape
    halved = total.map_coefficients(lambda c: -(c // 2))
    return halved


def test_swap_projection_involution_and_transpose(example_sextet):
    assert swap_projection(swap_projection(example_sextet)) == example_sextet
    rng = random.Random(2)
    for _ in range(10):
        q = _random_sextet(rng)
        s = swap_projection(q)
        qm = [f.coefficients() for f in q.forms()]
        sm = [f.coefficients() for f in s.forms()]
        for i in range(6):
            for j in range(6):
                assert sm[i][j] == qm[j][i]
        assert swap_projection(s) == q
    # a symmetric coefficient matrix is a fixed point
    sym = QuadricSextet.from_coefficients(
        [[1, 2, 3, 4, 5, 6],
         [2, 1, 0, 0, 0, 0],
         [3, 0, 1, 0, 0, 0],
         [4, 0, 0, 1, 0, 0],
         [5, 0, 0, 0, 1, 0],
         [6, 0, 0, 0, 0, 1]]
    )
    assert swap_projection(sym) == sym


def test_both_projection_orders_give_matching_discriminants():
    rng = random.Random(3)
    for _ in range(8):
        q = _random_sextet(rng, -5, 5)
        assert build_k3(q).branch_sextic == _det_by_permutations(q)
        s = swap_projection(q)
        assert build_k3(s).branch_sextic == _det_by_permutations(s)


def test_smoothness_examples(example_sextic):
    assert is_smooth_curve(example_sextic)
    assert is_smooth_curve(reduce_mod(example_sextic, prime_field(3)))
    assert not is_smooth_curve(TernaryForm(6, {(2, 4, 0): 1}))
    with pytest.raises(ValueError):
        is_smooth_curve(TernaryForm(6, {}))


def test_real_conditions(example_sextet):
    assert check_real_conditions(example_sextet)
    # positive-definite slot violation (A must be negative definite)
    bad = QuadricSextet(
        TernaryForm.from_coefficients(2, [1, 0, 0, 0, 0, 0]),
        example_sextet.B, example_sextet.C, example_sextet.D, example_sextet.E, example_sextet.F,
    )
    assert not check_real_conditions(bad)
    # semidefinite B (rank-2 Gram matrix) is rejected: definite means strict
    semi = QuadricSextet(
        example_sextet.A,
        TernaryForm.from_coefficients(2, [1, 0, 0, 1, 0, 0]),
        example_sextet.C, example_sextet.D, example_sextet.E, example_sextet.F,
    )
    assert not check_real_conditions(semi)


def test_2adic_conditions(example_sextet):
    assert check_2adic_conditions(example_sextet)

    def with_a(coeffs):
        return QuadricSextet(
            TernaryForm.from_coefficients(2, coeffs),
            example_sextet.B, example_sextet.C, example_sextet.D,
            example_sextet.E, example_sextet.F,
        )

    a = [c for c in example_sextet.A.coefficients()]
    a1 = list(a); a1[0] = 3
    assert not check_2adic_conditions(with_a(a1))  # 3 != 1 mod 8
    a2 = list(a); a2[1] = 4
    assert not check_2adic_conditions(with_a(a2))  # v_2 = 2 < 3


def test_real_conditions_imply_positive_minors(example_surface):
    """At sampled real points of w^2 = f, all three minors are positive."""
    m = minors(example_surface.sextet)
    pts = sample_local_points(example_surface, Place.real(), 100)
    assert len(pts) == 100
    for P in pts:
        assert m.M_A.evaluate(P.x) > 0
        assert m.M_D.evaluate(P.x) > 0
        assert m.M_F.evaluate(P.x) > 0


def test_sextet_json_roundtrip(example_sextet):
    text = example_sextet.to_json()
    assert QuadricSextet.from_json(text) == example_sextet
