from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from fakeclass.exactnum import (CyclotomicRational, bernoulli, bernoulli_polynomial,
                                cyclotomic_polynomial, euler_phi, factor, format_rational,
                                is_prime, is_squarefree, primes_up_to)


def test_bernoulli_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("n", range(61))
def test_bernoulli_recurrence_oracle(n):
    assert bernoulli(n) == oracles.bernoulli_recurrence(n)


@given(st.integers(min_value=1, max_value=60))
def test_bernoulli_odd_vanishing(k):
    n = 2 * k + 1
    assert bernoulli(n) == 0


@given(st.integers(min_value=0, max_value=12), st.fractions(max_denominator=30))
def test_bernoulli_polynomial_translation(n, x):
    # B_n(x + 1) - B_n(x) = n x^(n-1)
    lhs = bernoulli_polynomial(n, x + 1) - bernoulli_polynomial(n, x)
    assert lhs == (n * x ** (n - 1) if n else 0)


def test_bernoulli_polynomial_at_zero():
    for n in range(20):
        assert bernoulli_polynomial(n, 0) == bernoulli(n)


@given(st.integers(min_value=-10**12, max_value=10**12).filter(lambda n: n != 0))
def test_factor_round_trip(n):
    f = factor(n)
    assert f.value() == abs(n)
    assert all(is_prime(p) for p in f.primes)
    assert f == oracles.trial_factor(n)


def test_factor_examples():
    assert factor(315) == [(3, 2), (5, 1), (7, 1)]
    assert str(factor(2**11 * 3**5)) == "2^11*3^5"
    assert factor(1).value() == 1


def test_primes_and_squarefree():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_squarefree(30) and not is_squarefree(12)
    assert [euler_phi(m) for m in (1, 9, 15, 16)] == [1, 6, 8, 8]


def test_cyclotomic_polynomial():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_format_rational():
    assert format_rational(Fraction(-1, 12)) == "-1/12"
    assert format_rational(Fraction(3)) == "3"


MODULI = st.sampled_from([1, 2, 3, 4, 5, 7, 8, 9, 12, 15])


@st.composite
def cyc_triple(draw):
    m = draw(MODULI)
    coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=3, max_size=8)
    return m, [CyclotomicRational(m, draw(coeffs)) for _ in range(3)]


@given(cyc_triple())
def test_cyclotomic_ring_axioms(data):
    m, (a, b, c) = data
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert (a - a).is_zero()
    one = CyclotomicRational.rational(m, 1)
    assert a * one == a


@given(MODULI, st.integers(min_value=0, max_value=40))
def test_zeta_power_order(m, k):
    z = CyclotomicRational.zeta_power(m, k)
    assert z ** m == CyclotomicRational.rational(m, 1)
    # the sum of all m-th roots of unity vanishes for m > 1
    total = CyclotomicRational.rational(m, 0)
    for j in range(m):
        total = total + CyclotomicRational.zeta_power(m, j)
    assert total.is_zero() == (m > 1)


def test_trace_and_rationality():
    z = CyclotomicRational.zeta_power(5, 1)
    assert z.trace() == -1
    assert (z + z.conjugate(4)).is_rational() is False
    r = CyclotomicRational.rational(7, Fraction(3, 4))
    assert r.is_rational() and r.to_rational() == Fraction(3, 4)
    assert r.embed(21).to_rational() == Fraction(3, 4)
