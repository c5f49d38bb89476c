import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from analytica.complexq import I, ComplexRational
from analytica.multilinear import (
    FormError,
    SymForm,
    bound_chain_22,
    bound_chain_scaled,
    box_bound,
    eval_sym,
    lambda_split_check,
    multi_indices,
    polarize_binom,
    polarize_eps,
    polarize_scaled,
)
from conftest import rationals


@st.composite
def forms(draw, max_degree=5, max_dim=3):
    k = draw(st.integers(0, max_degree))
    d = draw(st.integers(1, max_dim))
    return SymForm(k, d, {a: draw(rationals) for a in multi_indices(k, d)})


def vectors(d):
    return st.tuples(*[rationals] * d)


def test_multi_index_count():
    assert len(list(multi_indices(3, 3))) == 10
    assert next(multi_indices(3, 2)) == (3, 0)


def test_inner_product_form():
    f = SymForm(2, 2, {(1, 1): Fraction(1, 2)})
    # T[0,1] = T[1,0] = 1/2 is the symmetrized x1 y2 + x2 y1 over 2
    assert f((1, 2), (3, 4)) == Fraction(1, 2) * (1 * 4 + 2 * 3)
    assert f.diagonal((1, 2)) == 2


def test_shape_errors():
    with pytest.raises(FormError):
        SymForm(2, 2, {(1, 0): 1})
    with pytest.raises(FormError):
        SymForm(9, 4)
    with pytest.raises(FormError):
        SymForm(2, 2)((1, 2),)
    assert SymForm(10, 1).degree == 10


@given(forms(), st.data())
def test_symmetry_and_diagonal(f, data):
    xs = [data.draw(vectors(f.dim)) for _ in range(f.degree)]
    value = eval_sym(f, xs)
    for perm in itertools.islice(itertools.permutations(xs), 6):
        assert eval_sym(f, list(perm)) == value
    x = data.draw(vectors(f.dim))
    assert f.diagonal(x) == eval_sym(f, [x] * f.degree)


@given(forms(), st.data())
def test_polarization_eps(f, data):
    xs = [data.draw(vectors(f.dim)) for _ in range(f.degree)]
    x0 = data.draw(vectors(f.dim))
    assert polarize_eps(f.diagonal, x0, xs) == eval_sym(f, xs)


@given(forms(), st.data())
def test_polarization_binom_and_scaled(f, data):
    a, x = data.draw(vectors(f.dim)), data.draw(vectors(f.dim))
    assert polarize_binom(f.diagonal, a, x, f.degree) == f.diagonal(x)
    assert polarize_scaled(f.diagonal, a, x, f.degree) == f.diagonal(x)


@given(forms(max_degree=4), st.data())
def test_lambda_split_complex(f, data):
    pairs = [(data.draw(vectors(f.dim)), data.draw(vectors(f.dim))) for _ in range(f.degree)]
    for lam in (I, ComplexRational(Fraction(1, 2), Fraction(-3))):
        lhs, rhs, n = lambda_split_check(f, pairs, lam)
        assert lhs == rhs and n == 2**f.degree


def test_lambda_split_real():
    f = SymForm.random(3, 2, random.Random(4))
    pairs = [((1, 2), (0, 1)), ((3, -1), (2, 2)), ((0, 1), (1, 0))]
    lhs, rhs, _ = lambda_split_check(f, pairs, Fraction(5, 3))
    assert lhs == rhs


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_bound_chain_22(k, d):
    f = SymForm.random(k, d, random.Random(10 * k + d))
    rep = bound_chain_22(f, 1, box_bound(f, 1), samples=60, seed=k)
    assert rep.precondition_ok and rep.violations == 0
    assert rep.max_ratio <= 1


def test_bound_chain_reports_failed_precondition():
    f = SymForm(2, 1, {(2,): 5})
    rep = bound_chain_22(f, 1, Fraction(1, 10), samples=20)
    assert not rep.precondition_ok and not rep.passed and rep.notes


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_bound_chain_scaled(k):
    f = SymForm.random(k, 2, random.Random(k))
    violations, ratio = bound_chain_scaled(f, (Fraction(1, 3), Fraction(-1, 2)), 1, samples=50, seed=k)
    assert violations == 0 and ratio <= 1
