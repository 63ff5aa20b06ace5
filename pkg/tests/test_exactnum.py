import random
from fractions import Fraction
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signcount.errors import InvalidInput, ParseError, TooLargeToFactor
from signcount.exactnum import (
    FactoredInteger,
    factorize,
    first_primes,
    format_rational,
    is_prime,
    isqrt,
    mobius,
    parse_rational,
)


def newton_isqrt(n):
    # independent of math.isqrt
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 1) // 2)
    while True:
        y = (x + n // x) // 2
        if y >= x:
            return x
        x = y


@pytest.mark.parametrize("text,value", [
    ("1/3", Fraction(1, 3)),
    ("2", Fraction(2)),
    ("1.25", Fraction(5, 4)),
    ("-0.1", Fraction(-1, 10)),
    (" 6/4 ", Fraction(3, 2)),
    (".5", Fraction(1, 2)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1e5", "nan", "1//2"])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_parse_rational_refuses_binary_floats():
    with pytest.raises(ParseError):
        parse_rational(0.1)


def test_format_rational_canonical():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-4, 2)) == "-2"


def test_first_primes():
    assert first_primes(1) == [2]
    assert first_primes(5) == [2, 3, 5, 7, 11]
    ps = first_primes(23)
    assert ps[-1] == 83
    assert all(is_prime(p) for p in ps)
    assert first_primes(200)[-1] == 1223


def test_mobius_examples():
    assert mobius(1) == 1
    assert mobius(30) == -1
    assert mobius(4) == 0


def test_isqrt_examples():
    assert isqrt(0) == 0
    assert isqrt(30) == 5
    q = prod(first_primes(23))
    r = isqrt(q)
    assert r * r <= q < (r + 1) ** 2
    assert r == newton_isqrt(q)


def test_isqrt_negative():
    with pytest.raises(InvalidInput):
        isqrt(-1)


def test_isqrt_postcondition_random():
    rng = random.Random(2024)
    for _ in range(10_000):
        n = rng.getrandbits(rng.randint(1, 256))
        r = isqrt(n)
        assert r * r <= n < (r + 1) ** 2


@settings(max_examples=500, deadline=None)
@given(st.integers(min_value=0, max_value=2**256))
def test_isqrt_matches_newton(n):
    assert isqrt(n) == newton_isqrt(n)


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(60).factors == ((2, 2), (3, 1), (5, 1))
    f = factorize(210)
    assert f.omega == 4 and f.is_squarefree


def test_factorize_large_semiprime():
    p, q = 4294967291, 4294967279  # largest primes below 2^32
    assert factorize(p * q).factors == ((q, 1), (p, 1))
    assert factorize(2**64).factors == ((2, 64),)


def test_factorize_guardrail():
    with pytest.raises(TooLargeToFactor):
        factorize(2**64 + 1)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=1, max_value=10**12))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert prod(p**e for p, e in f.factors) == n
    assert all(is_prime(p) for p, _ in f.factors)


def test_factored_integer_validation():
    with pytest.raises(InvalidInput):
        FactoredInteger(12, ((2, 1), (3, 1)))
    with pytest.raises(InvalidInput):
        FactoredInteger(6, ((3, 1), (2, 1)))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_mobius_multiplicative(a, b):
    if gcd(a, b) == 1:
        assert mobius(a * b) == mobius(a) * mobius(b)


rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@given(rationals, rationals, rationals)
def test_rational_order_is_strict_total(a, b, c):
    assert sum([a < b, a == b, b < a]) == 1
    if a < b and b < c:
        assert a < c
    # cross multiplication decides the order
    assert (a < b) == (a.numerator * b.denominator < b.numerator * a.denominator)
