"""Tests for exact rationals and residues modulo p^e."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import ContextMismatch, InsufficientValuation, NonInvertible, NonInvertibleDenominator, UndefinedValuation
from local_field import (
    LocalResidue,
    PrimeContext,
    lift_divide,
    lr_add,
    lr_inv,
    lr_mul,
    lr_neg,
    prime_context,
    reduce,
    valuation,
)


P, E = 13, 3
CTX = prime_context(P, E)

coprime_fractions = st.builds(
    Fraction,
    st.integers(min_value=-10**12, max_value=10**12),
    st.integers(min_value=1, max_value=10**9).filter(lambda d: d % P != 0),
)


def test_reduce_half_mod_7():
    assert reduce(Fraction(1, 2), prime_context(7, 1)).residue == 4


def test_reduce_bernoulli_four_mod_7():
    assert reduce(Fraction(-1, 30), prime_context(7, 1)).residue == 3


def test_reduce_integer():
    assert reduce(Fraction(-1), prime_context(7, 2)).residue == 48


def test_reduce_rejects_p_in_denominator():
    with pytest.raises(NonInvertibleDenominator):
        reduce(Fraction(1, 7), prime_context(7, 2))


def test_residue_is_canonical():
    r = reduce(Fraction(-5, 3), CTX)
    assert 0 <= r.residue < P ** E


def test_residue_out_of_range_rejected():
    with pytest.raises(ValueError):
        LocalResidue(49, 7, 2)


def test_inverse_table():
    for k in range(1, P):
        assert k * CTX.inverse(k) % CTX.modulus == 1


def test_inverse_beyond_table():
    assert (2 * P - 4) * CTX.inverse(2 * P - 4) % CTX.modulus == 1


def test_inverse_of_multiple_of_p():
    with pytest.raises(NonInvertible):
        CTX.inverse(2 * P)


def test_context_equality_ignores_table():
    assert prime_context(7, 2) == PrimeContext(7, 2)
    assert prime_context(7, 2) is prime_context(7, 2)


@pytest.mark.parametrize("p, e", [(9, 1), (1, 1), (7, 0)])
def test_prime_context_validation(p, e):
    with pytest.raises(ValueError):
        prime_context(p, e)


@given(coprime_fractions, coprime_fractions)
def test_reduce_respects_addition(a, b):
    assert reduce(a + b, CTX) == lr_add(reduce(a, CTX), reduce(b, CTX))


@given(coprime_fractions, coprime_fractions)
def test_reduce_respects_multiplication(a, b):
    assert reduce(a * b, CTX) == lr_mul(reduce(a, CTX), reduce(b, CTX))


@given(coprime_fractions)
def test_reduce_respects_negation(a):
    assert reduce(-a, CTX) == lr_neg(reduce(a, CTX))


@given(coprime_fractions.filter(lambda q: q.numerator % P != 0))
def test_inverse_is_two_sided(a):
    r = reduce(a, CTX)
    one = CTX.residue(1)
    assert lr_mul(r, lr_inv(r)) == one
    assert reduce(1 / a, CTX) == lr_inv(r)


@settings(max_examples=50)
@given(st.integers(0, P ** E - 1), st.integers(0, P ** E - 1), st.integers(0, P ** E - 1))
def test_ring_laws(x, y, z):
    a, b, c = CTX.residue(x), CTX.residue(y), CTX.residue(z)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert a - a == CTX.residue(0)


def test_operators_match_functions():
    a, b = CTX.residue(100), CTX.residue(2000)
    assert a + b == lr_add(a, b)
    assert a * b == lr_mul(a, b)
    assert -a == lr_neg(a)
    assert int(a) == 100


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        lr_add(prime_context(7, 1).residue(1), prime_context(7, 2).residue(1))
    with pytest.raises(ContextMismatch):
        lr_mul(prime_context(7, 1).residue(1), prime_context(11, 1).residue(1))


def test_inverse_of_non_unit():
    with pytest.raises(NonInvertible):
        lr_inv(prime_context(7, 2).residue(14))


@pytest.mark.parametrize("q, p, expected", [
    (Fraction(49, 20), 7, 2),
    (Fraction(1, 7), 7, -1),
    (Fraction(3, 5), 7, 0),
    (Fraction(-250, 3), 5, 3),
    (Fraction(7, 343), 7, -2),
])
def test_valuation(q, p, expected):
    assert valuation(q, p) == expected


def test_valuation_of_zero():
    with pytest.raises(UndefinedValuation):
        valuation(Fraction(0), 7)


@pytest.mark.parametrize("p", [1, 0, -7, 6])
def test_valuation_rejects_non_prime_base(p):
    with pytest.raises(ValueError):
        valuation(Fraction(5), p)


def test_lift_divide():
    lifted = lift_divide(prime_context(7, 3).residue(98), 2)
    assert lifted == prime_context(7, 1).residue(2)


def test_lift_divide_insufficient():
    with pytest.raises(InsufficientValuation):
        lift_divide(prime_context(7, 3).residue(50), 1)


def test_lift_divide_needs_room():
    with pytest.raises(ValueError):
        lift_divide(prime_context(7, 2).residue(0), 2)


@given(coprime_fractions, st.integers(1, 2))
def test_lift_divide_inverts_scaling(a, t):
    high = prime_context(P, E + t)
    scaled = reduce(a * P ** t, high)
    assert lift_divide(scaled, t) == reduce(a, CTX)
