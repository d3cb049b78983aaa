from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, strategies as st

from unipotent.rings import (CountingRing, OpCounter, PolynomialRing, PrimeField, RationalField,
                             RingError, SparsePoly, UnivariatePolyModP, count_ops, is_prime,
                             rat_normalize, ring_from_spec, ring_spec)


def test_is_prime_small_and_large():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1)
    assert not is_prime(561)
    assert not is_prime(2**61 + 1)


def test_prime_field_arithmetic():
    F = PrimeField(17)
    assert F.add(9, 10) == 2
    assert F.neg(3) == 14
    assert F.mul(5, 7) == 1
    assert F.mul(F.inv(5), 5) == 1
    assert F.parse("-1") == 16
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_prime_field_rejects_bad_modulus():
    with pytest.raises(RingError):
        PrimeField(15)
    with pytest.raises(RingError):
        PrimeField(2**31 + 11)


@given(st.integers(0, 16), st.integers(0, 16), st.integers(0, 16))
def test_prime_field_distributive(a, b, c):
    F = PrimeField(17)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_rationals():
    Q = RationalField()
    x = Q.parse("3/-6")
    assert x == Fraction(-1, 2)
    assert Q.format(Q.add(x, Q.one)) == "1/2"
    assert Q.mul(Q.inv(Q.parse("2/3")), Q.parse("2/3")) == 1
    with pytest.raises(ZeroDivisionError):
        rat_normalize(1, 0)
    with pytest.raises(ZeroDivisionError):
        Q.inv(Q.zero)


def test_random_rationals_respect_bit_size():
    Q = RationalField(bits=8)
    rng = Random(1)
    for _ in range(200):
        x = Q.random_element(rng)
        assert abs(x.numerator) < 2**8 and x.denominator < 2**8


def test_sparse_poly_arithmetic_and_degree():
    R = PolynomialRing(["a", "b"])
    a, b = R.gens()
    f = R.mul(R.add(a, b), R.sub(a, b))
    assert f == R.sub(R.mul(a, a), R.mul(b, b))
    assert f.degree() == 2
    assert R.is_zero(R.sub(f, f))
    assert R.format(R.parse("2*a^2*b - 3")) == R.format(R.sub(R.mul(R.from_int(2), R.mul(R.mul(a, a), b)), R.from_int(3)))
    assert f.evaluate(PrimeField(17), [3, 1]) == 8


def test_polynomial_units_only():
    R = PolynomialRing(1)
    assert R.inv(R.from_int(2)) == R.constant(Fraction(1, 2))
    with pytest.raises(RingError):
        R.inv(R.gen(0))


def test_counting_ring_counts_every_operation():
    F = PrimeField(17)
    c = OpCounter()
    R = CountingRing(F, c)
    R.add(1, 2)
    R.sub(1, 2)
    R.mul(3, 4)
    R.neg(1)
    R.eq(1, 1)
    R.is_zero(0)
    R.inv(3)
    assert (c.add, c.mul, c.neg, c.eq, c.inv) == (2, 1, 1, 2, 1)
    assert c.total() == 7


def test_count_ops_returns_snapshot_and_result():
    counts, result = count_ops(PrimeField(17), lambda R: R.mul(R.add(1, 2), 3))
    assert result == 9
    assert (counts.add, counts.mul) == (1, 1)


def test_univariate_degree_ring():
    T = UnivariatePolyModP(101)
    t = T.t
    f = T.add(T.mul(t, t), T.from_int(3))
    assert T.degree(f) == 2
    assert T.degree(T.sub(f, f)) == -1
    assert T.mul(T.from_int(0), f) == T.zero


def test_ring_specs():
    assert ring_spec(ring_from_spec("fp:17")) == "fp:17"
    assert ring_spec(ring_from_spec("q")) == "q"
    assert ring_spec(ring_from_spec("poly:3")) == "poly:3"
    with pytest.raises(RingError):
        ring_from_spec("zz")
