import random
from fractions import Fraction

import pytest

from dufloindex import linalg as la
from dufloindex.duflo import (
    Dist0, DistG, duflo, duflo_inv, harish_chandra_check, pair0, pairG, su2_character_pullback,
    su2_jchar_pullback,
)
from dufloindex.liealg import abelian, su2, su2_irrep
from dufloindex.scalar import Scalar, Series, random_series, series_eval_univariate_function
from dufloindex.weil import j_g


def random_dist(rng, g, order):
    return Dist0(g, dict(random_series(rng, g.d, order, density=0.3).items()))


def test_delta_pairs_to_value_at_zero():
    phi = Series(3, 2, {(0, 0, 0): 5, (1, 0, 0): 2})
    assert pair0(Dist0.delta(su2()), phi) == Scalar.of(5)


def test_second_derivative_of_square():
    assert pair0(Dist0(abelian(1), {(2,): 1}), Series(1, 2, {(2,): 1})) == Scalar.of(2)


def test_first_derivative_of_even_j_vanishes():
    assert pair0(Dist0(su2(), {(1, 0, 0): 1}), j_g(su2(), 4).series) == Scalar()


def test_pairing_needs_enough_order():
    with pytest.raises(ValueError, match="order too low for pairing"):
        pair0(Dist0(abelian(1), {(3,): 1}), Series.const(1, 2))


def test_abelian_duflo_is_identity():
    u = Dist0(abelian(2), {(2, 1): 3, (0, 1): 1})
    assert duflo(u).u == u


def test_duflo_round_trip_on_random_pairs():
    rng = random.Random(0)
    g = su2()
    for _ in range(20):
        u = random_dist(rng, g, 4)
        phi = random_series(rng, 3, 4)
        assert pair0(duflo_inv(duflo(u)), phi) == pair0(u, phi)


def test_duflo_of_delta_is_evaluation_at_identity():
    rng = random.Random(1)
    phi = random_series(rng, 3, 3)
    assert pairG(duflo(Dist0.delta(su2())), phi) == phi.constant_term()


def test_pushforward_of_derivative_kills_square():
    T = DistG(Dist0(abelian(1), {(1,): 1}))
    assert pairG(T, Series(1, 2, {(2,): 1})) == Scalar()


def test_duflo_pairing_matches_multiplied_test_function():
    rng = random.Random(2)
    g = su2()
    jser = j_g(g, 4).series
    for _ in range(10):
        u = random_dist(rng, g, 4)
        phi = random_series(rng, 3, 4)
        assert pairG(duflo(u), phi) == pair0(u, jser * phi)


def test_bilinearity():
    rng = random.Random(5)
    g = su2()
    u, v = random_dist(rng, g, 3), random_dist(rng, g, 3)
    phi = random_series(rng, 3, 3)
    assert pair0(u + v.scale(3), phi) == pair0(u, phi) + pair0(v, phi) * 3


@pytest.mark.parametrize("m", range(5))
def test_character_series_matches_matrix_exponential(m):
    direct = series_eval_univariate_function("exp", su2_irrep(m).series(6)).trace()
    assert su2_character_pullback(m, 6) == direct


def test_j_times_character_closed_form():
    assert su2_jchar_pullback(3, 6).equal_to_order(j_g(su2(), 6).series * su2_character_pullback(3, 6), 6)


def test_harish_chandra_trivial_and_spin_half():
    r = harish_chandra_check(range(4))
    assert r.passed
    # m = 1: dim 2 times (Casimir -3/4 plus shift -1/4)
    cas = la.is_scalar_multiple_of_identity(su2_irrep(1).casimir())
    assert cas == Scalar.of(Fraction(-3, 4))
    assert r.values["m=1"] == str(Scalar.of(-2))


def test_harish_chandra_quadratic_pattern():
    r = harish_chandra_check()
    assert r.passed
    assert r.values["fit_residual"] == "0"


def test_harish_chandra_refuses_underdetermined_fit():
    assert not harish_chandra_check(range(2)).passed


def test_invariance_survives_duflo():
    # a non-invariant monomial projection: x1 x2 is not Ad-invariant; Casimir symbol pairs it to 0
    g = su2()
    u = Dist0.casimir_symbol(g)
    phi = Series(3, 4, {(1, 1, 0): 1, (3, 1, 0): 2})
    assert pair0(u, phi) == Scalar()
    assert pairG(duflo(u), phi) == Scalar()
