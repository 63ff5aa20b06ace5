"""Moebius sums over squarefree divisors, and the prime-logarithm weights.

With ``Q = p_1 ... p_m`` the product of the first ``m`` primes::

    g(m) = (-1)^(m+1) / 4 * sum over d | Q of sgn(d^2 / Q - 1) * mu(d)
    Q(n) = sum over d | n, d <= sqrt(n) of mu(d)

and for squarefree ``n`` with ``k`` prime factors ``g_n(k) = (-1)^k / 2 * Q(n)``.
The weights ``log p_k`` are never evaluated: a signed sum of logarithms is
the logarithm of ``num / den`` and every comparison is made between
products of integers.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import (
    CrossCheckFailure,
    EqualIndices,
    IndexOutOfRange,
    InvalidInput,
    MethodMismatch,
    NotDivisibleByFour,
    NotSquarefree,
    PropositionViolated,
    TooFewFactors,
    TooManyElements,
    TooManyPrimeFactors,
)
from .exactnum import FactoredInteger, factorize, first_primes, isqrt

PRIMORIAL_MAX = 30
OMEGA_MAX = 40
_INT64_LIMIT = 1 << 62


@dataclass(frozen=True)
class PrimorialContext:
    m: int
    primes: tuple[int, ...] = field(init=False)
    primorial: int = field(init=False)
    sqrt_floor: int = field(init=False)

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInput("primorial context needs m >= 1")
        primes = tuple(first_primes(self.m))
        q = math.prod(primes)
        s = isqrt(q)
        # a squarefree number > 1 is never a perfect square
        assert s * s < q
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "primorial", q)
        object.__setattr__(self, "sqrt_floor", s)

    def factored(self) -> FactoredInteger:
        return FactoredInteger.from_primes(self.primes)


def _as_factored(n) -> FactoredInteger:
    return n if isinstance(n, FactoredInteger) else factorize(n)


# ------------------------------------------------------------------ Q(n)


def _pruned_python(primes, limit):
    total = 1
    stack = [(0, 1, 1)]
    while stack:
        start, prod, sgn = stack.pop()
        for i in range(start, len(primes)):
            p = primes[i]
            if prod > limit // p:
                break
            total -= sgn
            stack.append((i + 1, prod * p, -sgn))
    return total


def q_of_n(n) -> int:
    """``sum of mu(d)`` over divisors ``d <= sqrt(n)``; only squarefree ``d`` count.

    Depth-first over subsets of the distinct primes in increasing order,
    abandoning a branch as soon as its product passes ``isqrt(n)``.
    """
    n = _as_factored(n)
    if n.omega > OMEGA_MAX:
        raise TooManyPrimeFactors(f"{n.omega} distinct primes exceed the limit of {OMEGA_MAX}")
    limit = isqrt(n.value)
    primes = [p for p in n.primes if p <= limit]
    if limit < _INT64_LIMIT:
        return int(_kernels.pruned_divisor_mobius(np.array(primes, dtype=np.int64), limit))
    return _pruned_python(primes, limit)


def q_of_n_full(n) -> int:
    """Reference for :func:`q_of_n`: every subset of primes, no pruning."""
    n = _as_factored(n)
    limit = isqrt(n.value)
    divisors = [(1, 1)]
    for p in n.primes:
        divisors += [(d * p, -mu) for d, mu in divisors]
    return sum(mu for d, mu in divisors if d <= limit)


# ------------------------------------------------------- g(m) and g_n(k)


def divisor_sign_sum(primes, threshold: int) -> int:
    """``sum over d | prod(primes) of mu(d) * (+1 if d > threshold else -1)``.

    The smallest primes whose product fits a machine word form the inner
    Gray walk (compiled); the remaining primes index blocks.  For a block
    divisor ``d_hi``, ``d_hi * d_lo > threshold`` iff
    ``d_lo > threshold // d_hi``.
    """
    primes = sorted(primes)
    low = 0
    prod = 1
    while low < len(primes) and prod * primes[low] < _INT64_LIMIT:
        prod *= primes[low]
        low += 1
    inner = np.array(primes[:low], dtype=np.int64)
    outer = primes[low:]
    total = 0
    d_hi = 1
    mu_hi = 1
    cur = 0
    for i in range(1 << len(outer)):
        if i:
            k = (i & -i).bit_length() - 1
            bit = 1 << k
            if cur & bit:
                d_hi //= outer[k]
            else:
                d_hi *= outer[k]
            cur ^= bit
            mu_hi = -mu_hi
        t = min(threshold // d_hi, _INT64_LIMIT)
        total += mu_hi * int(_kernels.divisor_walk(inner, t))
    return total


def _g_definition(primes, n_value: int) -> int:
    k = len(primes)
    s = isqrt(n_value)
    if s * s == n_value:
        raise CrossCheckFailure(f"{n_value} is a perfect square, so sgn(d^2/n - 1) can vanish")
    total = divisor_sign_sum(primes, s)
    if total % 4:
        raise NotDivisibleByFour(f"divisor sign sum {total} is not divisible by 4")
    return (-1) ** (k + 1) * total // 4


def _g_via_q(n: FactoredInteger) -> int:
    q = q_of_n(n)
    if q % 2:
        raise CrossCheckFailure(f"Q({n.value}) = {q} is odd; it must be even here")
    return (-1) ** n.omega * q // 2


def _guard(k: int) -> None:
    if k > PRIMORIAL_MAX:
        raise TooManyElements(f"{k} primes exceed the enumeration guardrail of {PRIMORIAL_MAX}")


def g_m(ctx: PrimorialContext | int, method: str = "both") -> int:
    """``g(m)`` by the divisor-sum definition, through ``Q(primorial)``, or both."""
    if not isinstance(ctx, PrimorialContext):
        ctx = PrimorialContext(ctx)
    if ctx.m < 2:
        raise InvalidInput("g(m) needs m >= 2")
    _guard(ctx.m)
    return _g_dispatch(ctx.factored(), method, f"g({ctx.m})")


def _g_dispatch(n: FactoredInteger, method: str, label: str) -> int:
    if method not in ("definition", "via_q", "both"):
        raise InvalidInput(f"unknown method {method!r}")
    if method == "definition":
        return _g_definition(n.primes, n.value)
    if method == "via_q":
        return _g_via_q(n)
    a = _g_definition(n.primes, n.value)
    b = _g_via_q(n)
    if a != b:
        raise MethodMismatch(f"{label}: definition gives {a}, via Q(n) gives {b}")
    return a


def g_n(n, method: str = "both") -> int:
    """``g_n(k)`` for a squarefree ``n`` with ``k >= 2`` prime factors."""
    n = _as_factored(n)
    if not n.is_squarefree:
        raise NotSquarefree(f"{n.value} is not squarefree")
    if n.omega < 2:
        raise TooFewFactors(f"{n.value} has {n.omega} prime factor(s); need at least 2")
    _guard(n.omega)
    return _g_dispatch(n, method, f"g_{n.value}({n.omega})")


def g_table(odd_max: int = 23, method: str = "both", parity: str = "odd") -> list[tuple[int, int]]:
    start = 3 if parity == "odd" else 2
    return [(m, g_m(m, method)) for m in range(start, odd_max + 1, 2)]


# ---------------------------------------------------------- N_ij(beta_m)


def _beta_pair(ctx: PrimorialContext, i: int, j: int):
    if ctx.m < 3:
        raise InvalidInput("N_ij(beta_m) needs m >= 3")
    _guard(ctx.m)
    for x in (i, j):
        if not 0 <= x < ctx.m:
            raise IndexOutOfRange(f"index {x + 1} outside 1..{ctx.m}")
    if i == j:
        raise EqualIndices(f"i and j must differ (both {i + 1})")
    rest = [p for k, p in enumerate(ctx.primes) if k not in (i, j)]
    small, big = sorted((ctx.primes[i], ctx.primes[j]))
    return rest, small, big


@dataclass
class MulSignedSum:
    """``<eps, log p>`` held as the fraction ``num / den`` of prime products."""

    num: int
    den: int

    def flip(self, p: int, to_negative: bool) -> None:
        if to_negative:
            self.num //= p
            self.den *= p
        else:
            self.den //= p
            self.num *= p


def n_ij_beta(ctx: PrimorialContext | int, i: int, j: int) -> int:
    """``N_ij`` at the weights ``log p_1, ..., log p_m`` (0-based ``i``, ``j``).

    Sign vectors over the other primes are walked in Gray order; the test
    ``log(big/small) < log(num/den) < log(small*big)`` is decided as
    ``big * den < small * num`` and ``num < small * big * den``.
    """
    if not isinstance(ctx, PrimorialContext):
        ctx = PrimorialContext(ctx)
    rest, small, big = _beta_pair(ctx, i, j)
    s = MulSignedSum(math.prod(rest), 1)
    total = 0
    parity = 1
    cur = 0
    for step in range(1 << len(rest)):
        if step:
            k = (step & -step).bit_length() - 1
            bit = 1 << k
            s.flip(rest[k], not cur & bit)
            cur ^= bit
            parity = -parity
        if big * s.den < small * s.num and s.num < small * big * s.den:
            total += parity
    return total


def n_ij_beta_mobius(ctx: PrimorialContext | int, i: int, j: int) -> int:
    """Moebius-sum form of ``N_ij(beta_m)``.

    ``(-1)^m`` times the sum of ``mu(d)`` over divisors ``d`` of
    ``Q / (p_i p_j)`` with ``sqrt(Q) / p_small < d < sqrt(Q)``, decided as
    ``Q < p_small^2 d^2`` and ``d^2 < Q``.
    """
    if not isinstance(ctx, PrimorialContext):
        ctx = PrimorialContext(ctx)
    rest, small, _ = _beta_pair(ctx, i, j)
    q = ctx.primorial
    divisors = [(1, 1)]
    for p in rest:
        divisors += [(d * p, -mu) for d, mu in divisors]
    total = sum(mu for d, mu in divisors if q < small * small * d * d and d * d < q)
    return (-1) ** ctx.m * total


def n_ij_beta_checked(ctx: PrimorialContext | int, i: int, j: int) -> int:
    if not isinstance(ctx, PrimorialContext):
        ctx = PrimorialContext(ctx)
    a = n_ij_beta(ctx, i, j)
    b = n_ij_beta_mobius(ctx, i, j)
    if a != b:
        raise CrossCheckFailure(
            f"N_{i + 1},{j + 1}(beta_{ctx.m}): direct count {a}, Moebius sum {b}"
        )
    return a


# ------------------------------------------------------------ classifier


class Prop1Class(enum.Enum):
    PRIME = "prime"
    EVEN_OMEGA = "even-omega"
    ODD_OMEGA_EVEN = "odd-omega-even"


def proposition1_classify(n) -> tuple[Prop1Class, int]:
    """Classify a squarefree ``n > 1`` and check ``Q(n)`` against its class.

    Primes have ``Q = 1``, an even number of prime factors forces ``Q = 0``
    and an odd number ``>= 3`` forces ``Q`` even.
    """
    n = _as_factored(n)
    if n.value <= 1:
        raise InvalidInput("classification needs n > 1")
    if not n.is_squarefree:
        raise NotSquarefree(f"{n.value} is not squarefree")
    q = q_of_n(n)
    if n.omega == 1:
        cls, ok = Prop1Class.PRIME, q == 1
    elif n.omega % 2 == 0:
        cls, ok = Prop1Class.EVEN_OMEGA, q == 0
    else:
        cls, ok = Prop1Class.ODD_OMEGA_EVEN, q % 2 == 0
    if not ok:
        raise PropositionViolated(f"Q({n.value}) = {q} contradicts class {cls.value}")
    return cls, q


def smallest_prime_factors(limit: int) -> list[int]:
    spf = list(range(limit + 1))
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == p:
            for q in range(p * p, limit + 1, p):
                if spf[q] == q:
                    spf[q] = p
    return spf


def squarefree_factorizations(limit: int):
    """Yield ``FactoredInteger`` for every squarefree ``1 < n <= limit``."""
    spf = smallest_prime_factors(limit)
    for n in range(2, limit + 1):
        primes = []
        x = n
        while x > 1:
            p = spf[x]
            x //= p
            if x % p == 0:
                break
            primes.append(p)
        else:
            yield FactoredInteger(n, tuple((p, 1) for p in primes))


def scan_proposition1(limit: int = 100_000) -> dict[str, int]:
    """Classify every squarefree ``1 < n <= limit``; returns counts per class."""
    counts = {c.value: 0 for c in Prop1Class}
    for n in squarefree_factorizations(limit):
        cls, _ = proposition1_classify(n)
        counts[cls.value] += 1
    return counts
