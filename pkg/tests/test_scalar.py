import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dufloindex.scalar import (
    I, ONE, PI, TAYLOR, GaussQ, Scalar, Series, SeriesMatrix, binomial_half, random_series,
    series_det, series_eval_univariate_function, series_invert, series_pfaffian, series_sqrt,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussQ, fractions, fractions)
scalars = st.dictionaries(st.integers(-3, 3), gauss, max_size=3).map(Scalar)


@given(scalars, scalars, scalars)
def test_scalar_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Scalar()


@given(gauss, gauss)
def test_gauss_division_inverts_multiplication(a, b):
    if b:
        assert (a * b) / b == a


def test_i_squared_and_pi_powers():
    assert I * I == -ONE
    assert PI ** -2 * PI ** 2 == ONE
    assert str(Scalar.of(1, -2, 1)) == "(1-2i)·pi^1"


def test_non_monomial_division_is_rejected():
    with pytest.raises(ValueError, match="non-monomial divisor"):
        ONE / (ONE + PI)


def test_as_gauss_rejects_pi_dependence():
    with pytest.raises(ValueError):
        PI.as_gauss()


def test_complex_value_of_pi_symbol():
    assert complex(Scalar.of(0, 1, 1)) == pytest.approx(3.141592653589793j)


def test_series_product_truncates_at_order():
    x = Series.var(1, 3, 0)
    assert (x * x * x * x).is_zero()
    assert (x * x).coefficient((2,)) == ONE


def test_exp_taylor_matches_factorials():
    x = Series.var(1, 6, 0)
    e = series_eval_univariate_function("exp", SeriesMatrix([[x]]))[0, 0]
    for k in range(7):
        assert e.coefficient((k,)) == Scalar.of(Fraction(1, factorial(k)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_inverse_round_trip(seed):
    rng = random.Random(seed)
    s = random_series(rng, 2, 4, unit=True)
    assert (s * series_invert(s)).equal_to_order(Series.const(2, 4), 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_sqrt_squares_back(seed):
    rng = random.Random(seed)
    s = random_series(rng, 2, 4, unit=True)
    r = series_sqrt(s)
    assert (r * r).equal_to_order(s, 4)


def test_sqrt_needs_unit_constant():
    with pytest.raises(ValueError, match="unit constant term"):
        series_sqrt(Series.const(1, 2, 4))


def test_binomial_half_coefficients():
    assert [binomial_half(k) for k in range(4)] == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]


def test_det_of_diagonal_and_multiplicativity():
    rng = random.Random(5)
    A = SeriesMatrix([[random_series(rng, 2, 3) for _ in range(3)] for _ in range(3)])
    B = SeriesMatrix([[random_series(rng, 2, 3) for _ in range(3)] for _ in range(3)])
    assert series_det(A @ B).equal_to_order(series_det(A) * series_det(B), 3)


def test_pfaffian_squares_to_determinant():
    rng = random.Random(2)
    n = 4
    rows = [[Series(2, 3) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = random_series(rng, 2, 3)
            rows[i][j], rows[j][i] = v, -v
    A = SeriesMatrix(rows)
    pf = series_pfaffian(A)
    assert (pf * pf).equal_to_order(series_det(A), 3)


def test_sinc_half_series_matches_closed_form():
    # sin(z/2)/(z/2) = 1 - z^2/24 + z^4/1920 - ...
    assert TAYLOR["sinc_half"](2) == Fraction(-1, 24)
    assert TAYLOR["sinc_half"](4) == Fraction(1, 1920)
    assert TAYLOR["sinhc_half"](2) == Fraction(1, 24)


def test_function_of_matrix_requires_nilpotent_argument():
    with pytest.raises(ValueError):
        series_eval_univariate_function("exp", SeriesMatrix([[Series.const(1, 2, 1)]]))


def test_derivative_at_zero_uses_factorials():
    s = Series(2, 4, {(2, 1): 3})
    assert s.derivative_at_zero((2, 1)) == Scalar.of(6)
    with pytest.raises(ValueError, match="order too low"):
        s.derivative_at_zero((3, 2))
