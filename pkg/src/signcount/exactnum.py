"""Exact arithmetic kernel: rationals, integer square roots, primes, Moebius.

Rationals are ``fractions.Fraction`` (canonical form, comparisons by
cross-multiplication).  Nothing in the package decides an inequality with
floating point.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import InvalidInput, ParseError, TooLargeToFactor

ExactScalar = Fraction

FACTOR_LIMIT = 1 << 64

_RATIONAL_RE = re.compile(r"^[+-]?(\d+(/\d+)?|\d*\.\d+|\d+\.\d*)$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a decimal such as ``"1.25"`` exactly.

    Integers and Fractions pass through.  Binary floats are refused, since
    their value is never what the user typed.
    """
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {type(text).__name__}")
    s = text.strip().replace(" ", "")
    if not _RATIONAL_RE.match(s):
        raise ParseError(f"not a rational: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator: {text!r}") from None


def format_rational(x: Fraction) -> str:
    """Canonical text form: ``"p"`` or ``"p/q"`` in lowest terms."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign(x) -> int:
    return (x > 0) - (x < 0)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)


def isqrt(n: int) -> int:
    """Floor square root of a nonnegative integer, exact at any size."""
    if n < 0:
        raise InvalidInput(f"isqrt of negative number {n}")
    return math.isqrt(n)


def first_primes(m: int) -> list[int]:
    """The first ``m`` primes, by a sieve whose bound is grown until enough."""
    if m < 1:
        raise InvalidInput("first_primes needs m >= 1")
    # Rosser: p_m < m (ln m + ln ln m) for m >= 6
    bound = 15 if m < 6 else int(m * (math.log(m) + math.log(math.log(m)))) + 1
    while True:
        primes = primes_up_to(bound)
        if len(primes) >= m:
            return primes[:m]
        bound *= 2


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise InvalidInput(f"FactoredInteger needs a positive value, got {self.value}")
        primes = [p for p, _ in self.factors]
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise InvalidInput("factor primes must be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise InvalidInput("factor exponents must be positive")
        if math.prod(p**e for p, e in self.factors) != self.value:
            raise InvalidInput(f"factors do not multiply to {self.value}")

    @classmethod
    def from_primes(cls, primes: Sequence[int]) -> "FactoredInteger":
        """Build a squarefree integer from distinct primes (primality not rechecked)."""
        ps = sorted(int(p) for p in primes)
        if len(set(ps)) != len(ps):
            raise InvalidInput("primes must be distinct")
        if any(p < 2 for p in ps):
            raise InvalidInput("primes must be >= 2")
        return cls(math.prod(ps), tuple((p, 1) for p in ps))

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def mobius(n: FactoredInteger | int) -> int:
    if not isinstance(n, FactoredInteger):
        n = factorize(n)
    if not n.is_squarefree:
        return 0
    return -1 if n.omega % 2 else 1


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24, which covers 2^64."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        f = lambda v: (v * v + c) % n  # noqa: E731
        x = y
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> FactoredInteger:
    """Canonical factorization of ``1 <= n <= 2**64``.

    Small factors come off by trial division; any remaining cofactor is
    split by Pollard-Brent with a deterministic primality test.
    """
    n = int(n)
    if n < 1:
        raise InvalidInput(f"factorize needs n >= 1, got {n}")
    if n > FACTOR_LIMIT:
        raise TooLargeToFactor(f"{n} exceeds 2^64; supply its prime factors explicitly")
    found: dict[int, int] = {}
    rest = n
    p = 2
    while p < 1000 and p * p <= rest:
        while rest % p == 0:
            found[p] = found.get(p, 0) + 1
            rest //= p
        p += 1 if p == 2 else 2
    if rest > 1:
        _split(rest, found)
    return FactoredInteger(n, tuple(sorted(found.items())))
