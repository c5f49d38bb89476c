import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analytica.series import (
    FLOAT64,
    DivergentMajorantError,
    EmptyDerivativeError,
    KindMismatchError,
    TruncatedSeries,
    cauchy_product,
    evaluate_with_tail_bound,
    exponential,
    geometric,
    reciprocal_one_plus_square,
    series_add,
    series_derivative,
    series_power,
    series_reciprocal,
)
from conftest import brute_product, rational_series

EXP4 = TruncatedSeries.from_coeffs([1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)])


def test_product_truncates_to_min_order():
    a = TruncatedSeries.from_coeffs([1, 1, 1])
    b = TruncatedSeries.from_coeffs([1, -1])
    assert cauchy_product(a, b).coeffs == (1, 0)


def test_exp_squared_is_exp_of_double():
    sq = cauchy_product(EXP4, EXP4)
    assert sq.coeffs == tuple(Fraction(2**k, math.factorial(k)) for k in range(5))


def test_kinds_never_mix():
    with pytest.raises(KindMismatchError):
        series_add(EXP4, EXP4.to_float())
    with pytest.raises(KindMismatchError):
        cauchy_product(EXP4, EXP4.to_float())


def test_float_kind_is_kept():
    a = EXP4.to_float()
    assert cauchy_product(a, a).kind == FLOAT64


def test_derivative_examples():
    assert series_derivative(EXP4).coeffs == EXP4.coeffs[:4]
    assert series_derivative(TruncatedSeries.from_coeffs([0, 1, 0, 0])).coeffs == (1, 0, 0)
    assert series_derivative(TruncatedSeries.from_coeffs([5, 0, 0])).coeffs == (0, 0)
    with pytest.raises(EmptyDerivativeError):
        series_derivative(TruncatedSeries.from_coeffs([3]))


def test_tail_bound_geometric_closed_form():
    a = geometric().series(10)
    value, tail = evaluate_with_tail_bound(a, Fraction(1, 2), 1, 1)
    assert value == 2 - Fraction(1, 2**10)
    assert tail == Fraction(1, 2**10)


def test_tail_bound_at_zero():
    value, tail = evaluate_with_tail_bound(EXP4, 0, 1, 1)
    assert (value, tail) == (1, 0)


def test_tail_bound_exp_contains_e():
    a = exponential().series(8)
    value, tail = evaluate_with_tail_bound(a, 1, 1, Fraction(1, 2))
    assert abs(math.e - float(value)) <= float(tail)


def test_tail_bound_rejects_divergent_majorant():
    with pytest.raises(DivergentMajorantError):
        evaluate_with_tail_bound(EXP4, 2, 1, Fraction(1, 2))


def test_reciprocal_one_plus_square_recovers_identity():
    # (1 + u^2) * f = 1 modulo u^21, at several centers
    for center in (0, 1, Fraction(-3, 2)):
        f = reciprocal_one_plus_square(center).series(20)
        c = Fraction(center)
        den = TruncatedSeries.from_coeffs([1 + c * c, 2 * c, 1] + [0] * 18)
        assert cauchy_product(den, f) == TruncatedSeries.one(20)


def test_reciprocal_series():
    a = TruncatedSeries.from_coeffs([1, -1, 0, 0, 0])
    assert series_reciprocal(a).coeffs == (1, 1, 1, 1, 1)


@settings(max_examples=80)
@given(rational_series(), rational_series(), rational_series())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert cauchy_product(a, b) == cauchy_product(b, a)
    assert cauchy_product(cauchy_product(a, b), c) == cauchy_product(a, cauchy_product(b, c))
    assert cauchy_product(a, b + c) == cauchy_product(a, b) + cauchy_product(a, c)


@settings(max_examples=100)
@given(rational_series(max_order=12), rational_series(max_order=12))
def test_product_matches_brute_force(a, b):
    n = min(a.order, b.order)
    assert list(cauchy_product(a, b).coeffs) == brute_product(a.coeffs, b.coeffs)[: n + 1]


@given(rational_series(max_order=10), st.integers(0, 5))
def test_power_is_repeated_product(a, e):
    acc = TruncatedSeries.one(a.order)
    for _ in range(e):
        acc = cauchy_product(acc, a)
    assert series_power(a, e) == acc


@settings(max_examples=100)
@given(
    st.sampled_from(["geometric", "exp"]),
    st.fractions(Fraction(-9, 10), Fraction(9, 10), max_denominator=50),
    st.integers(1, 30),
)
def test_tail_bound_contains_closed_form(name, t, N):
    if name == "geometric":
        a, M, rho, truth = geometric().series(N), 1, 1, 1 / (1 - float(t))
    else:
        # 1/k! <= 2 * (1/2)^k for all k
        a, M, rho, truth = exponential().series(N), 2, Fraction(1, 2), math.exp(float(t))
    value, tail = evaluate_with_tail_bound(a, t, M, rho)
    assert abs(truth - float(value)) <= float(tail) * (1 + 1e-9) + 1e-15
