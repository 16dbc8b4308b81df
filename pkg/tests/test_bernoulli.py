"""Tests for Bernoulli numbers."""

import math
from fractions import Fraction

import pytest

from bernoulli import (
    BernoulliCache,
    bernoulli_convolution,
    bernoulli_exact,
    bernoulli_mod,
    is_von_staudt_pole,
    precompute_bernoulli,
)
from errors import VonStaudtPole
from local_field import prime_context, reduce
from utils import is_prime, sieve_primes


@pytest.mark.parametrize("k, expected", [
    (0, Fraction(1)),
    (1, Fraction(-1, 2)),
    (2, Fraction(1, 6)),
    (3, Fraction(0)),
    (4, Fraction(-1, 30)),
    (6, Fraction(1, 42)),
    (8, Fraction(-1, 30)),
    (10, Fraction(5, 66)),
    (12, Fraction(-691, 2730)),
    (14, Fraction(7, 6)),
])
def test_known_values(k, expected):
    assert bernoulli_exact(k) == expected


def test_odd_indices_vanish():
    assert all(bernoulli_exact(k) == 0 for k in range(3, 120, 2))


def test_sign_alternation():
    for k in range(1, 61):
        assert (bernoulli_exact(2 * k) > 0) == (k % 2 == 1)


def test_recurrence_residual_is_zero():
    for k in range(1, 121):
        assert sum(math.comb(k + 1, j) * bernoulli_exact(j) for j in range(k + 1)) == 0


def test_von_staudt_clausen_denominators():
    for k in range(2, 81, 2):
        expected = math.prod(p for p in range(2, k + 2) if is_prime(p) and k % (p - 1) == 0)
        assert bernoulli_exact(k).denominator == expected


def test_negative_index():
    with pytest.raises(ValueError):
        bernoulli_exact(-1)


@pytest.mark.parametrize("k, p, expected", [(6, 7, True), (4, 7, False), (12, 13, True), (3, 5, False), (0, 7, False)])
def test_is_von_staudt_pole(k, p, expected):
    assert is_von_staudt_pole(k, p) is expected


def test_bernoulli_mod_anchor():
    assert bernoulli_mod(4, prime_context(7, 1)).residue == 3


def test_bernoulli_mod_pole():
    with pytest.raises(VonStaudtPole):
        bernoulli_mod(6, prime_context(7, 2))


def test_bernoulli_mod_high_exponent():
    ctx = prime_context(11, 3)
    residue = bernoulli_mod(10 - 2, ctx).residue
    assert residue * 30 % ctx.modulus == -1 % ctx.modulus


def test_convolution_anchor():
    assert bernoulli_convolution(4) == Fraction(-7, 180)


def test_convolution_small():
    assert bernoulli_convolution(0) == 1
    assert bernoulli_convolution(1) == -1


@pytest.mark.parametrize("p", sieve_primes(7, 499))
def test_convolution_vanishes_mod_p(p):
    assert reduce(bernoulli_convolution(p - 3), prime_context(p, 1)).residue == 0


def test_seeded_cache_keeps_extending():
    snapshot = precompute_bernoulli(20)
    assert len(snapshot) >= 21
    cache = BernoulliCache()
    cache.seed(snapshot)
    assert len(cache) == len(snapshot)
    assert cache.get(40) == bernoulli_exact(40)


def test_fresh_cache_matches_shared_one():
    cache = BernoulliCache()
    cache.extend_to(30)
    assert cache.values == tuple(bernoulli_exact(k) for k in range(31))
