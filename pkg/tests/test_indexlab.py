from fractions import Fraction

import pytest

from dufloindex import linalg as la
from dufloindex.duflo import pairG
from dufloindex.gradedalg import Multivector
from dufloindex.indexlab import (
    block_checks, block_dirac, build_model, casimir_value, charsum_distribution, distributional_index, heat_check,
    lhs_exact, max_contributing_spin, rhs_exact, rhs_local, richardson_zero, standard_phis, theorem_check,
    torus_character_pullback,
)
from dufloindex.scalar import PI, Scalar, Series


@pytest.fixture(scope="module")
def model0():
    return build_model(0, 12)


def test_model_volume_and_curvature(model0):
    assert model0.fundclass.volume == PI * 4
    assert model0.curvature.components[0] == Multivector.blade(2, (0, 1), -1)
    assert model0.curvature == model0.spin.Lambda.scale(-2)


def test_build_model_with_zero_cutoff():
    assert build_model(3, 0).cutoff == 0
    with pytest.raises(ValueError):
        build_model(0, -1)


def test_trivial_block_has_spinor_kernel(model0):
    b = block_dirac(model0, 0)
    # V_0 (x) S: D = 0, kernel is all of S with labels +1 (even) and -1 (odd)
    assert la.is_zero_matrix(b.operator)
    assert b.kernel == {1: (1, 0), -1: (0, 1)}
    assert b.index == 0


@pytest.mark.parametrize("two_j", range(5))
def test_blocks_are_odd_equivariant_and_satisfy_mckean_singer(model0, two_j):
    assert block_checks(model0, block_dirac(model0, two_j)).passed


@pytest.mark.parametrize("w", [-2, 0, 1])
def test_index_is_m_minus_w(w):
    cs = distributional_index(build_model(w, 12))
    assert cs.coefficients
    for m, c in cs.coefficients.items():
        assert c == m - w
    assert cs.fit.residual == 0
    assert [str(c) for c in cs.fit.coefficients] == [str(Fraction(-w)), "1"]


def test_index_of_weight_zero_vanishes_without_twist(model0):
    assert distributional_index(model0).coefficients[0] == 0


def test_index_is_stable_in_the_cutoff():
    m = build_model(1, 10)
    a = distributional_index(m)
    b = distributional_index(m, 16)
    assert all(b.coefficients[k] == v for k, v in a.coefficients.items())


def test_weights_beyond_reach_are_flagged():
    # w = 4, cutoff 4: window |m| <= 2, but m = -2 needs 2j = 5
    cs = distributional_index(build_model(4, 4))
    assert max_contributing_spin(-2, 4) == 5
    assert -2 in cs.flagged and -2 not in cs.coefficients
    assert 3 not in cs.coefficients
    assert all(c == m - 4 for m, c in cs.coefficients.items())


@pytest.mark.parametrize("k", range(4))
@pytest.mark.parametrize("p", [-3, 0, 2, 5])
def test_derivative_dictionary_matches_characters(k, p):
    from dufloindex.duflo import Dist0, DistG
    from dufloindex.indexlab import weight_power_derivative
    from dufloindex.liealg import abelian

    T = DistG(Dist0(abelian(1), {(k,): weight_power_derivative(k)}))
    assert pairG(T, torus_character_pullback(p, 4)) == Scalar.of(p ** k)


def test_lhs_values(model0):
    cs = distributional_index(build_model(1, 12))
    assert lhs_exact(cs, Series.const(1, 3)) == Scalar.of(-1)
    assert lhs_exact(cs, Series.var(1, 3, 0)) == Scalar.of(0, 2)
    assert charsum_distribution(cs).u.order == 1


def test_rhs_values_by_hand():
    m = build_model(3, 4)
    assert rhs_exact(m, Series.const(1, 3)) == Scalar.of(-3)
    assert rhs_local(m, Series.const(1, 3)) == Scalar.of(-3)
    assert rhs_exact(m, Series.var(1, 3, 0)) == Scalar.of(0, 2)


@pytest.mark.parametrize("w", [-2, -1, 0, 1, 2])
def test_index_formula_holds(w):
    assert theorem_check(w, standard_phis(), cutoff=8).passed


def test_wrong_supertrace_sign_breaks_the_local_route():
    assert not theorem_check(1, standard_phis(), cutoff=8, normalization=Scalar.of(0, 2)).passed


def test_richardson_is_exact_on_polynomials():
    ts = [0.4, 0.2, 0.1, 0.05]
    assert richardson_zero(ts, [3 - 2 * t + t ** 3 for t in ts]) == pytest.approx(3)


def test_casimir_value():
    assert casimir_value(0) == 0.0
    assert casimir_value(2) == pytest.approx(2.0)
    assert casimir_value(3) == pytest.approx(3.75)


@pytest.mark.parametrize("m", [-2, 0, 2])
def test_heat_trace_small_weights(m):
    h = heat_check(build_model(0, 6), m)
    assert h.exact == m
    assert h.relative_error < 1e-3


def test_heat_trace_decays_at_the_block_casimir():
    h = heat_check(build_model(0, 8), 3)
    assert h.decay_rate == pytest.approx(h.casimir, rel=1e-6)
    assert all(c == pytest.approx(3, rel=1e-6) for c in h.corrected)
