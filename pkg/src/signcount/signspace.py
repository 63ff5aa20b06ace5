"""Subsets of a finite ground set as bit patterns, and even maps on them.

A subset ``A`` of ``{0, ..., m-1}`` is an integer whose bit ``k`` is set iff
``k`` is in ``A``.  Read as a sign vector, a set bit means ``eps_k = -1``.

An even map ``sigma`` satisfies ``sigma(X \\ A) == sigma(A)`` for all ``A``.
For those, the sum ``N_sigma(u, v)`` over ``A`` with ``u in A``, ``v not in
A`` and ``sigma(A) == sigma(A + v)`` equals a quarter of the total sum of
``sigma``, whatever ``u`` and ``v`` are.
"""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    EqualIndices,
    EvenCardinality,
    GuardrailExceeded,
    IndexOutOfRange,
    InvalidInput,
    NotDivisibleByFour,
    NotEvenMap,
    NotOddMap,
    OddProduct,
    ParseError,
    TooManyElements,
)

MAX_WIDTH = 63
DENSE_MAX = 24
CALLBACK_MAX = 30


@dataclass(frozen=True)
class SignMask:
    bits: int
    width: int

    def __post_init__(self):
        if not 0 <= self.width <= MAX_WIDTH:
            raise TooManyElements(f"mask width {self.width} outside 0..{MAX_WIDTH}")
        if self.bits < 0 or self.bits >> self.width:
            raise InvalidInput(f"bits {self.bits:#x} do not fit width {self.width}")

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "SignMask":
        bits = 0
        for k, e in enumerate(signs):
            if e not in (1, -1):
                raise InvalidInput(f"sign entries must be +1 or -1, got {e}")
            if e == -1:
                bits |= 1 << k
        return cls(bits, len(signs))

    @classmethod
    def from_indices(cls, indices, width: int) -> "SignMask":
        bits = 0
        for k in indices:
            bits |= 1 << k
        return cls(bits, width)

    def signs(self) -> tuple[int, ...]:
        return tuple(-1 if self.bits >> k & 1 else 1 for k in range(self.width))

    def indices(self) -> list[int]:
        return [k for k in range(self.width) if self.bits >> k & 1]

    def complement(self) -> "SignMask":
        return SignMask(self.bits ^ ((1 << self.width) - 1), self.width)

    def popcount(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, k: int) -> bool:
        return bool(self.bits >> k & 1)

    def __str__(self) -> str:
        return "(" + ",".join("+1" if e == 1 else "-1" for e in self.signs()) + ")"


def parity_sign(mask: SignMask | int) -> int:
    """``(-1) ** |A|``, i.e. the product of the sign vector's entries."""
    bits = mask.bits if isinstance(mask, SignMask) else mask
    return -1 if bits.bit_count() & 1 else 1


class Evenness(enum.Enum):
    VERIFIED = "verified"
    ASSUMED = "assumed"


@dataclass(frozen=True)
class EvenMapOracle:
    """Ground-set size plus a valuation ``int mask -> +1/-1``.

    ``evenness`` records whether evenness was checked (``VERIFIED``) or
    taken on trust (``ASSUMED``).  Maps that are not known to be even can
    still be wrapped with ``ASSUMED``; ``n_sigma`` is defined for any map.
    """

    size: int
    valuation: Callable[[int], int]
    evenness: Evenness = Evenness.ASSUMED
    table: tuple[int, ...] | None = None

    def __post_init__(self):
        if not 1 <= self.size <= MAX_WIDTH:
            raise TooManyElements(f"ground set size {self.size} outside 1..{MAX_WIDTH}")

    def __call__(self, bits: int) -> int:
        return self.valuation(bits)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @classmethod
    def from_table(cls, values: Sequence[int], evenness=Evenness.ASSUMED) -> "EvenMapOracle":
        n = len(values)
        m = n.bit_length() - 1
        if n < 2 or 1 << m != n:
            raise InvalidInput(f"dense table length {n} is not 2^m with m >= 1")
        if m > DENSE_MAX:
            raise TooManyElements(f"dense tables are capped at m <= {DENSE_MAX}")
        table = tuple(int(v) for v in values)
        if any(v not in (1, -1) for v in table):
            raise InvalidInput("dense table entries must be +1 or -1")
        return cls(m, table.__getitem__, evenness, table)

    def verified(self) -> "EvenMapOracle":
        """Return a copy marked ``VERIFIED``; raises if the map is not even."""
        ok, bad = verify_even(self)
        if not ok:
            raise NotEvenMap(f"map is not even: sigma(A) != sigma(X\\A) for A = {bad}", bad)
        return EvenMapOracle(self.size, self.valuation, Evenness.VERIFIED, self.table)

    def dense(self) -> tuple[int, ...]:
        if self.table is not None:
            return self.table
        _check_exhaustive(self.size)
        return tuple(self.valuation(a) for a in range(1 << self.size))


def _check_exhaustive(m: int) -> None:
    if m > CALLBACK_MAX:
        raise TooManyElements(f"exhaustive subset sums are capped at m <= {CALLBACK_MAX}")


def verify_even(sigma: EvenMapOracle) -> tuple[bool, SignMask | None]:
    """Check every complement pair once; return (ok, first violating A)."""
    m = sigma.size
    _check_exhaustive(m)
    full = sigma.full
    # masks without the top bit hit each pair {A, X\A} exactly once
    for a in range(1 << (m - 1)):
        if sigma(a) != sigma(full ^ a):
            return False, SignMask(a, m)
    return True, None


def _check_pair(m: int, u: int, v: int) -> None:
    for x in (u, v):
        if not 0 <= x < m:
            raise IndexOutOfRange(f"index {x} outside 0..{m - 1}")
    if u == v:
        raise EqualIndices(f"u and v must differ (both {u})")


def _masks_with(m: int, inside: int, outside: int):
    """All masks with bit ``inside`` set and bit ``outside`` clear."""
    free = [k for k in range(m) if k not in (inside, outside)]
    base = 1 << inside
    for t in range(1 << len(free)):
        a = base
        for pos, k in enumerate(free):
            if t >> pos & 1:
                a |= 1 << k
        yield a


def n_sigma(sigma: EvenMapOracle, u: int, v: int) -> int:
    """Sum of ``sigma(A)`` over ``u in A``, ``v not in A``, ``sigma(A) == sigma(A + v)``.

    ``u`` and ``v`` are 0-based.
    """
    m = sigma.size
    _check_pair(m, u, v)
    _check_exhaustive(m)
    vb = 1 << v
    total = 0
    for a in _masks_with(m, u, v):
        s = sigma(a)
        if s == sigma(a | vb):
            total += s
    return total


def proof_identity_sides(sigma: EvenMapOracle, u: int, v: int) -> tuple[int, int]:
    """``(2 * N_sigma(u, v), sum over u in A, v not in A of sigma(A) + sigma(A + v))``.

    The two agree for every map, even or not.
    """
    m = sigma.size
    _check_pair(m, u, v)
    vb = 1 << v
    rhs = 0
    for a in _masks_with(m, u, v):
        rhs += sigma(a) + sigma(a | vb)
    return 2 * n_sigma(sigma, u, v), rhs


def subset_sum(sigma: EvenMapOracle) -> int:
    """Total of ``sigma`` over all subsets, visited in reflected Gray order."""
    m = sigma.size
    _check_exhaustive(m)
    total = 0
    g = 0
    for i in range(1 << m):
        g = i ^ (i >> 1)
        total += sigma(g)
    return total


def theorem1_value(sigma: EvenMapOracle) -> tuple[int, int]:
    """Return ``(sum, sum // 4)``; for an even map the quotient is ``N_sigma``."""
    total = subset_sum(sigma)
    if total % 4:
        raise NotDivisibleByFour(
            f"subset sum {total} is not divisible by 4, so the map is not even"
        )
    return total, total // 4


def tau_to_sigma(tau: EvenMapOracle) -> EvenMapOracle:
    """Turn an odd map (``tau(X\\A) == -tau(A)``, ``|X|`` odd) into an even one."""
    m = tau.size
    if m % 2 == 0:
        raise EvenCardinality(f"tau transform needs an odd ground set, got m = {m}")
    _check_exhaustive(m)
    full = tau.full
    for a in range(1 << (m - 1)):
        if tau(a) != -tau(full ^ a):
            raise NotOddMap(f"tau(X\\A) != -tau(A) for A = {SignMask(a, m)}", SignMask(a, m))

    def sigma(bits: int, _tau=tau.valuation) -> int:
        return -_tau(bits) if bits.bit_count() & 1 else _tau(bits)

    out = EvenMapOracle(m, sigma, Evenness.ASSUMED)
    return out.verified()


@dataclass(frozen=True)
class ProductMap:
    """``sigma(A) = prod of f(a) for a in A`` with ``prod f == 1``."""

    f: tuple[int, ...]

    def __post_init__(self):
        if any(x not in (1, -1) for x in self.f):
            raise InvalidInput("product map values must be +1 or -1")
        if len(self.f) < 2:
            raise InvalidInput("product map needs at least two elements")
        neg = sum(1 for x in self.f if x == -1)
        if neg % 2:
            raise OddProduct("product of f is -1, so the product map is not even")

    @property
    def negative_bits(self) -> int:
        return sum(1 << k for k, x in enumerate(self.f) if x == -1)

    def oracle(self) -> EvenMapOracle:
        neg = self.negative_bits

        def sigma(bits: int) -> int:
            return -1 if (bits & neg).bit_count() & 1 else 1

        # f has even support and X\A flips exactly the support bits
        return EvenMapOracle(len(self.f), sigma, Evenness.VERIFIED)

    def predicted_value(self) -> int:
        m = len(self.f)
        if all(x == 1 for x in self.f):
            return 2 ** (m - 2)
        return 0


def product_map(f: Sequence[int]) -> tuple[EvenMapOracle, int]:
    pm = ProductMap(tuple(int(x) for x in f))
    return pm.oracle(), pm.predicted_value()


def complement_pairs(m: int) -> list[tuple[int, int]]:
    """Pairs ``(A, X\\A)`` with ``A`` lacking the top bit; a perfect matching."""
    if m < 1:
        raise InvalidInput("complement pairing needs m >= 1")
    full = (1 << m) - 1
    pairs = [(a, full ^ a) for a in range(1 << (m - 1))]
    seen = {x for p in pairs for x in p}
    assert len(seen) == 1 << m and all(a != b for a, b in pairs)
    return pairs


def random_even_map(m: int, rng: random.Random) -> EvenMapOracle:
    """Uniform random even map: one fair ``+1/-1`` per complement pair."""
    if m > DENSE_MAX:
        raise TooManyElements(f"dense tables are capped at m <= {DENSE_MAX}")
    table = [0] * (1 << m)
    for a, b in complement_pairs(m):
        table[a] = table[b] = rng.choice((1, -1))
    return EvenMapOracle.from_table(table, Evenness.VERIFIED)


def random_map(m: int, rng: random.Random) -> EvenMapOracle:
    table = [rng.choice((1, -1)) for _ in range(1 << m)]
    return EvenMapOracle.from_table(table, Evenness.ASSUMED)


def load_dense_map(path) -> EvenMapOracle:
    """Read ``{"m": int, "values": [+-1, ...]}`` with ``values[k] = sigma(mask k)``."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read map file {path}: {exc}") from None
    if not isinstance(data, dict) or "values" not in data or "m" not in data:
        raise ParseError("map file must be an object with keys 'm' and 'values'")
    values = data["values"]
    if not isinstance(values, list) or not isinstance(data["m"], int):
        raise ParseError("'m' must be an integer and 'values' a list")
    if len(values) != 1 << data["m"]:
        raise ParseError(f"'values' has {len(values)} entries, expected 2^{data['m']}")
    if data["m"] > DENSE_MAX:
        raise GuardrailExceeded(f"dense tables are capped at m <= {DENSE_MAX}")
    return EvenMapOracle.from_table(values)
