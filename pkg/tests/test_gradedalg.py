import random

import pytest

from dufloindex import linalg as la
from dufloindex.gradedalg import (
    CliffElt, Multivector, berezin_supertrace, chevalley, chevalley_inv, exterior_exp, spinor_rep,
)
from dufloindex.scalar import GaussQ, Scalar


def random_element(cls, n, rng, density=0.6):
    terms = {}
    for mask in range(1 << n):
        if rng.random() < density:
            terms[mask] = GaussQ(rng.randint(-4, 4), rng.randint(-2, 2))
    return cls(n, terms)


def e(n, *idx):
    return CliffElt.blade(n, idx)


def test_generators_square_to_minus_one():
    for i in range(4):
        g = CliffElt.generator(4, i)
        assert g * g == CliffElt.scalar(4, -1)


def test_generators_anticommute():
    a, b = CliffElt.generator(3, 0), CliffElt.generator(3, 2)
    assert a * b == -(b * a)
    assert a * b == e(3, 0, 2)


def test_bivector_squares_to_minus_one():
    b = e(2, 0, 1)
    assert b * b == CliffElt.scalar(2, -1)


def test_clifford_product_is_associative():
    rng = random.Random(3)
    for _ in range(20):
        a, b, c = (random_element(CliffElt, 4, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_wedge_is_graded_commutative():
    rng = random.Random(4)
    for _ in range(20):
        a = random_element(Multivector, 4, rng).grade_part(1)
        b = random_element(Multivector, 4, rng).grade_part(2)
        assert a ^ b == b ^ a
        assert (a ^ a).is_zero()


@pytest.mark.parametrize("n", [2, 4, 6])
def test_spinor_rep_is_a_clifford_rep(n):
    S = spinor_rep(n)
    for i in range(n):
        for j in range(n):
            anti = la.anticommutator(S.gen(i), S.gen(j))
            want = la.matscale(la.identity(S.dim), -2 if i == j else 0)
            assert la.mat_equal(anti, want)
    G = S.grading_matrix()
    assert la.mat_equal(la.matmul(G, G), la.identity(S.dim))
    for i in range(n):
        assert la.is_zero_matrix(la.anticommutator(G, S.gen(i)))


@pytest.mark.parametrize("n,value", [(2, Scalar.of(0, -2)), (4, Scalar.of(-4)), (6, Scalar.of(0, 8))])
def test_top_blade_supertrace_normalization(n, value):
    top = CliffElt.blade(n, tuple(range(n)))
    assert berezin_supertrace(top) == value
    assert spinor_rep(n).supertrace(spinor_rep(n).represent(top)) == value


def test_supertrace_vanishes_below_top_degree():
    S = spinor_rep(4)
    for mask in range(15):
        assert S.supertrace(S.blade_matrix(mask)) == Scalar()


def test_odd_dimension_supertrace_is_refused():
    with pytest.raises(ValueError, match="even n"):
        berezin_supertrace(CliffElt.scalar(3))


def test_chevalley_sends_ordered_products_to_wedges():
    assert chevalley(e(3, 0, 2)) == Multivector.blade(3, (0, 2))
    m = Multivector.blade(3, (0, 1, 2), 5)
    assert chevalley(chevalley_inv(m)) == m


def test_exterior_exp_of_bivector():
    b = Multivector.blade(4, (0, 1)) + Multivector.blade(4, (2, 3))
    ex = exterior_exp(b)
    assert ex.coeff((0, 1, 2, 3)) == Scalar.of(1)
    assert ex.coeff(()) == Scalar.of(1)


def test_exterior_exp_rejects_odd_input():
    with pytest.raises(ValueError):
        exterior_exp(Multivector.generator(2, 0))


def test_blade_out_of_range():
    with pytest.raises(ValueError):
        Multivector(2, {(0, 2): 1})


def test_mixing_algebras_is_an_error():
    with pytest.raises(TypeError):
        CliffElt.scalar(2) + Multivector.scalar(2)
    with pytest.raises(ValueError):
        CliffElt.scalar(2) + CliffElt.scalar(4)
