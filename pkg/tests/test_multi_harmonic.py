"""Tests for multiple harmonic sums: fast path, enumeration and triple/quadruple checks."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import NonInvertibleDenominator, OracleBoundExceeded, OutOfApplicabilityRange
from harmonic import harmonic_exact, harmonic_table
from local_field import prime_context, reduce
from multi_harmonic import (
    E3_SPEC,
    E4_SPEC,
    MhsAudit,
    MhsSpec,
    mhs,
    mhs_bruteforce,
    newton_identity_check,
    quadruple_check,
    triple_relations_check,
)
from utils import sieve_primes


SAMPLED_PRIMES = sieve_primes(61, 400)[:10]


def test_spec_parsing():
    assert MhsSpec.parse("1,2,1") == MhsSpec.of(1, 2, 1)
    assert str(MhsSpec.of(2, 1, 1)) == "(2,1,1)"
    assert MhsSpec.of(2, 1, 1).reversed() == MhsSpec.of(1, 1, 2)
    assert MhsSpec.of(1, 2, 1).weight == 4
    assert MhsSpec.of(1, 2, 1).depth == 3


@pytest.mark.parametrize("exponents", [(), (0,), (1, -1)])
def test_spec_validation(exponents):
    with pytest.raises(ValueError):
        MhsSpec(exponents)


def test_small_elementary_sums():
    assert mhs_bruteforce(E3_SPEC, 3) == Fraction(1, 6)
    assert mhs_bruteforce(E4_SPEC, 4) == Fraction(1, 24)
    assert mhs_bruteforce(E4_SPEC, 3) == 0
    assert mhs_bruteforce(MhsSpec.of(1, 2), 2) == Fraction(1, 4)


def test_empty_range_is_zero():
    ctx = prime_context(7, 2)
    assert mhs(MhsSpec.of(1, 1), 0, ctx).residue == 0
    assert mhs(MhsSpec.of(1, 1), 1, ctx).residue == 0


def test_depth_one_is_harmonic_table():
    ctx = prime_context(31, 2)
    for m in (1, 2, 3):
        table = harmonic_table(30, m, ctx)
        assert all(mhs(MhsSpec.of(m), n, ctx) == table[n] for n in range(31))


def test_fast_path_rejects_p_in_range():
    with pytest.raises(NonInvertibleDenominator):
        mhs(E3_SPEC, 7, prime_context(7, 1))


def test_bruteforce_bounds():
    with pytest.raises(OracleBoundExceeded):
        mhs_bruteforce(E3_SPEC, 61)
    with pytest.raises(OracleBoundExceeded):
        mhs_bruteforce(MhsSpec.of(1, 1, 1, 1, 1), 10)


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_fast_path_matches_enumeration_up_to_sixty(depth):
    for exponents in itertools.product((1, 2), repeat=depth):
        spec = MhsSpec(exponents)
        exact = mhs_bruteforce(spec, 60)
        for p in SAMPLED_PRIMES:
            ctx = prime_context(p, 1)
            assert mhs(spec, 60, ctx) == reduce(exact, ctx)


@pytest.mark.parametrize("exponents", list(itertools.product((1, 2), repeat=4)))
def test_fast_path_matches_enumeration_depth_four(exponents):
    spec = MhsSpec(exponents)
    for n in (4, 17, 40):
        exact = mhs_bruteforce(spec, n)
        for p in SAMPLED_PRIMES:
            ctx = prime_context(p, 2)
            assert mhs(spec, n, ctx) == reduce(exact, ctx)


@pytest.mark.parametrize("spec", [E4_SPEC, MhsSpec.of(1, 2, 1, 1), MhsSpec.of(2, 1, 1, 2)])
def test_fast_path_matches_enumeration_depth_four_at_sixty(spec):
    exact = mhs_bruteforce(spec, 60)
    for p in (61, 67, 71):
        ctx = prime_context(p, 2)
        assert mhs(spec, 60, ctx) == reduce(exact, ctx)


@pytest.mark.parametrize("k", range(1, 51))
def test_symmetric_sum_identity(k):
    lhs = sum((Fraction(1, i * j) for i, j in itertools.combinations_with_replacement(range(1, k + 1), 2)), Fraction(0))
    assert lhs == (harmonic_exact(k, 1) ** 2 + harmonic_exact(k, 2)) / 2


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("n", range(0, 51))
def test_depth_two_shuffle(m, n):
    expected = (harmonic_exact(n, m) ** 2 - harmonic_exact(n, 2 * m)) / 2
    assert mhs_bruteforce(MhsSpec.of(m, m), n) == expected


@pytest.mark.parametrize("exponents", [s for depth in (1, 2, 3) for s in itertools.product((1, 2, 3), repeat=depth)])
@pytest.mark.parametrize("p", [13, 17, 31])
def test_reversal_symmetry(exponents, p):
    spec = MhsSpec(exponents)
    ctx = prime_context(p, 1)
    sign = -1 if spec.weight % 2 else 1
    forward = mhs(spec, p - 1, ctx).residue
    backward = mhs(spec.reversed(), p - 1, ctx).residue
    assert forward == (sign * backward) % p


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(1, 3), min_size=1, max_size=4),
    st.integers(0, 22),
    st.sampled_from([23, 29, 31]),
    st.integers(1, 3),
)
def test_fast_path_matches_enumeration_property(exponents, n, p, e):
    spec = MhsSpec(tuple(exponents))
    ctx = prime_context(p, e)
    assert mhs(spec, n, ctx) == reduce(mhs_bruteforce(spec, n), ctx)


@pytest.mark.parametrize("n", range(4, 41))
def test_newton_identity(n):
    result = newton_identity_check(n)
    assert result.passed
    assert result.prime is None
    assert result.modulus == [None]


def test_newton_identity_bounds():
    with pytest.raises(OutOfApplicabilityRange):
        newton_identity_check(3)
    with pytest.raises(OracleBoundExceeded):
        newton_identity_check(61)


@pytest.mark.parametrize("p", sieve_primes(7, 199))
def test_triple_relations(p):
    result = triple_relations_check(p)
    assert result.passed
    assert len(result.members) == 5
    assert not result.oracle_checked


@pytest.mark.parametrize("p", sieve_primes(7, 199))
def test_quadruple(p):
    assert quadruple_check(p).passed


def test_triple_relations_with_oracle():
    result = triple_relations_check(31, oracle=True)
    assert result.passed
    assert result.oracle_checked
    assert [m.label for m in result.members[5:]] == ["oracle (2,1,1)", "oracle (1,2,1)", "oracle (1,1,2)"]


def test_oracle_beyond_bounds_is_not_claimed():
    assert not triple_relations_check(67, oracle=True).oracle_checked
    assert quadruple_check(31, oracle=True).oracle_checked
    assert not quadruple_check(37, oracle=True).oracle_checked


def test_audit_reuses_values():
    audit = MhsAudit(prime_context(13, 1), enabled=True)
    first = audit(E3_SPEC, 12)
    second = audit(E3_SPEC, 12)
    assert first == second
    assert len(audit.members) == 1
    assert audit.checked


def test_disabled_audit():
    audit = MhsAudit(prime_context(13, 1))
    audit(E3_SPEC, 12)
    assert audit.members == []
    assert not audit.checked
