"""Signed counting of sign vectors whose weighted sum lies in an open interval.

For weights ``w`` of length ``r`` and an open interval ``(lo, hi)``::

    signed_count = sum of prod(eps) over eps in {+1,-1}^r with lo < <eps, w> < hi

Two engines compute it.  ``brute`` walks all ``2**r`` vectors in reflected
Gray order, updating the sum by ``+-2 w_k`` per step.  ``mitm`` splits the
indices in halves, sorts one half and answers each sum of the other half
with prefix-summed parities.  They share no code beyond input
normalization, so each checks the other.
"""
from __future__ import annotations

import enum
import math
import os
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import CrossCheckFailure, DegenerateInput, EmptyInterval, InvalidInput, TooManyElements
from .exactnum import lcm_of_denominators, parse_rational
from .signspace import SignMask

BRUTE_MAX = 30
MITM_MAX = 50
AUTO_MITM_FROM = 24
INT64_SAFE = 1 << 62


class Degeneracy(enum.Enum):
    UNKNOWN = "unknown"
    NON_DEGENERATE = "nondegenerate"
    DEGENERATE = "degenerate"


@dataclass
class WeightVector:
    """Exact weights plus their common-denominator integer form.

    ``normalized[k] == weights[k] * scale`` with ``scale`` the lcm of the
    denominators.  The degeneracy status is filled in once by
    :func:`find_vanishing` and never changes afterwards.
    """

    weights: tuple[Fraction, ...]
    scale: int = field(init=False)
    normalized: tuple[int, ...] = field(init=False)
    degeneracy: Degeneracy = field(default=Degeneracy.UNKNOWN, init=False)
    witness: SignMask | None = field(default=None, init=False)

    def __post_init__(self):
        self.weights = tuple(parse_rational(w) for w in self.weights)
        self.scale = lcm_of_denominators(self.weights)
        self.normalized = tuple(int(w * self.scale) for w in self.weights)

    @classmethod
    def of(cls, values: Sequence) -> "WeightVector":
        if isinstance(values, WeightVector):
            return values
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.weights)

    def delete(self, *indices: int) -> "WeightVector":
        """Drop the given 0-based entries, keeping the order of the rest."""
        drop = set(indices)
        return WeightVector(tuple(w for k, w in enumerate(self.weights) if k not in drop))

    def _set_degeneracy(self, status: Degeneracy, witness: SignMask | None) -> None:
        if self.degeneracy is Degeneracy.UNKNOWN:
            self.degeneracy = status
            self.witness = witness


@dataclass(frozen=True)
class OpenInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", parse_rational(self.lo))
        object.__setattr__(self, "hi", parse_rational(self.hi))
        if not self.lo < self.hi:
            raise EmptyInterval(f"open interval ({self.lo}, {self.hi}) is empty")

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi


def _integer_problem(w: WeightVector, iv: OpenInterval | None):
    """Scale weights and bounds by one positive integer so all are integers."""
    if iv is None:
        return list(w.normalized), None, None
    scale = math.lcm(w.scale, iv.lo.denominator, iv.hi.denominator)
    factor = scale // w.scale
    ints = [x * factor for x in w.normalized]
    return ints, int(iv.lo * scale), int(iv.hi * scale)


def _clamp(ints, lo, hi):
    """Clamp the bounds to just outside the reachable range ``[-B, B]``."""
    bound = sum(abs(x) for x in ints)
    if lo is None:
        return bound, -bound - 1, bound + 1
    edge = bound + 1
    return bound, min(max(lo, -edge), edge), min(max(hi, -edge), edge)


def resolve_threads(threads=None) -> int:
    """Thread budget: ``SIGNCOUNT_THREADS`` beats the argument; ``"auto"`` is the CPU count."""
    env = os.environ.get("SIGNCOUNT_THREADS")
    if env:
        threads = env
    if threads in (None, ""):
        return 1
    if threads == "auto":
        return os.cpu_count() or 1
    try:
        return max(1, int(threads))
    except ValueError:
        raise InvalidInput(f"thread budget must be a positive integer or 'auto', got {threads!r}") from None


def _check_size(r: int, cap: int) -> None:
    if r > cap:
        raise TooManyElements(f"{r} weights exceed the guardrail of {cap} for this engine")


# ---------------------------------------------------------------- brute force


def _block_bits(r: int, threads: int) -> int:
    if threads <= 1:
        return 0
    return min(r, math.ceil(math.log2(threads * 8)))


def _walk_python(steps, nbits, s, parity, lo, hi):
    signed = unsigned = signsum = zeros = 0
    cur = 0
    for i in range(1 << nbits):
        if i:
            k = (i & -i).bit_length() - 1
            bit = 1 << k
            if cur & bit:
                s += steps[k]
            else:
                s -= steps[k]
            cur ^= bit
            parity = -parity
        if s > 0:
            signsum += parity
        elif s == 0:
            zeros += 1
        else:
            signsum -= parity
        if lo < s < hi:
            signed += parity
            unsigned += 1
    return signed, unsigned, signsum, zeros


def gray_walk_totals(ints: Sequence[int], lo: int, hi: int, threads: int = 1):
    """Exhaustive Gray walk over all sign vectors of integer weights.

    Returns ``(signed, unsigned, signsum, zeros)`` for bounds ``lo < s < hi``.
    The mask space is cut on its top bits into blocks, each walked from its
    own exact starting sum; block results add up exactly, so the answer does
    not depend on ``threads``.
    """
    r = len(ints)
    bound, lo, hi = _clamp(ints, lo, hi)
    t = _block_bits(r, threads)
    low = r - t
    steps = [2 * x for x in ints[:low]]
    fast = 2 * bound < _kernels.FAST_BOUND
    if fast:
        step_hi, step_lo = _kernels.split_array(steps)
        a_hi, a_lo = _kernels.split(lo)
        b_hi, b_lo = _kernels.split(hi)
    base = sum(ints[:low])

    def run(block: int):
        s = base
        for pos in range(t):
            x = ints[low + pos]
            s += -x if block >> pos & 1 else x
        parity = -1 if block.bit_count() & 1 else 1
        if fast:
            s_hi, s_lo = _kernels.split(s)
            res = _kernels.gray_walk(step_hi, step_lo, low, s_hi, s_lo, parity, a_hi, a_lo, b_hi, b_lo)
            return tuple(int(v) for v in res)
        return _walk_python(steps, low, s, parity, lo, hi)

    blocks = range(1 << t)
    if threads > 1 and t > 0:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]
    return tuple(sum(col) for col in zip(*results))


def signed_count_brute(w, iv: OpenInterval, threads: int = 1) -> int:
    w = WeightVector.of(w)
    _check_size(len(w), BRUTE_MAX)
    ints, lo, hi = _integer_problem(w, iv)
    return gray_walk_totals(ints, lo, hi, threads)[0]


def unsigned_count_brute(w, iv: OpenInterval, threads: int = 1) -> int:
    w = WeightVector.of(w)
    _check_size(len(w), BRUTE_MAX)
    ints, lo, hi = _integer_problem(w, iv)
    return gray_walk_totals(ints, lo, hi, threads)[1]


# ------------------------------------------------------------ meet in middle


def _half_sums(ints: Sequence[int], use_numpy: bool):
    """All signed sums of ``ints`` and their parities; index bit k means eps_k = -1."""
    if use_numpy:
        sums = np.zeros(1, dtype=np.int64)
        par = np.ones(1, dtype=np.int64)
        for x in ints:
            sums = np.concatenate((sums + x, sums - x))
            par = np.concatenate((par, -par))
        return sums, par
    sums, par = [0], [1]
    for x in ints:
        sums = [s + x for s in sums] + [s - x for s in sums]
        par = par + [-p for p in par]
    return sums, par


def _halves(ints):
    h = (len(ints) + 1) // 2
    return ints[:h], ints[h:]


def _mitm_interval(ints, lo, hi):
    bound, lo, hi = _clamp(ints, lo, hi)
    left, right = _halves(ints)
    use_numpy = 2 * bound < INT64_SAFE
    a_sums, a_par = _half_sums(left, use_numpy)
    b_sums, b_par = _half_sums(right, use_numpy)
    if use_numpy:
        order = np.argsort(b_sums, kind="stable")
        b_sorted = b_sums[order]
        prefix = np.concatenate(([0], np.cumsum(b_par[order])))
        left_idx = np.searchsorted(b_sorted, lo - a_sums, side="right")
        right_idx = np.searchsorted(b_sorted, hi - a_sums, side="left")
        width = np.maximum(right_idx - left_idx, 0)
        inside = np.where(width > 0, prefix[right_idx] - prefix[np.minimum(left_idx, right_idx)], 0)
        return int(np.dot(a_par, inside)), int(width.sum())
    order = sorted(range(len(b_sums)), key=b_sums.__getitem__)
    b_sorted = [b_sums[k] for k in order]
    prefix = [0, *accumulate(b_par[k] for k in order)]
    signed = unsigned = 0
    for s, p in zip(a_sums, a_par):
        i = bisect_right(b_sorted, lo - s)
        j = bisect_left(b_sorted, hi - s)
        if j > i:
            signed += p * (prefix[j] - prefix[i])
            unsigned += j - i
    return signed, unsigned


def signed_count_mitm(w, iv: OpenInterval) -> int:
    w = WeightVector.of(w)
    _check_size(len(w), MITM_MAX)
    ints, lo, hi = _integer_problem(w, iv)
    return _mitm_interval(ints, lo, hi)[0]


def unsigned_count_mitm(w, iv: OpenInterval) -> int:
    w = WeightVector.of(w)
    _check_size(len(w), MITM_MAX)
    ints, lo, hi = _integer_problem(w, iv)
    return _mitm_interval(ints, lo, hi)[1]


def pick_engine(r: int, engine: str = "auto") -> str:
    if engine == "auto":
        return "mitm" if r >= AUTO_MITM_FROM else "brute"
    if engine not in ("brute", "mitm"):
        raise InvalidInput(f"unknown engine {engine!r}")
    return engine


def signed_count(w, iv: OpenInterval, engine: str = "auto", threads: int = 1) -> int:
    w = WeightVector.of(w)
    if pick_engine(len(w), engine) == "mitm":
        return signed_count_mitm(w, iv)
    return signed_count_brute(w, iv, threads)


def unsigned_count(w, iv: OpenInterval, engine: str = "auto", threads: int = 1) -> int:
    w = WeightVector.of(w)
    if pick_engine(len(w), engine) == "mitm":
        return unsigned_count_mitm(w, iv)
    return unsigned_count_brute(w, iv, threads)


# ---------------------------------------------------------- degeneracy / sgn


def find_vanishing(w) -> Degeneracy:
    """Search for ``eps`` with ``<eps, w> == 0`` by meet in the middle.

    The result and any witness are cached on the weight vector.
    """
    w = WeightVector.of(w)
    if w.degeneracy is not Degeneracy.UNKNOWN:
        return w.degeneracy
    r = len(w)
    _check_size(r, MITM_MAX)
    ints = list(w.normalized)
    left, right = _halves(ints)
    h = len(left)
    a_sums, _ = _half_sums(left, False)
    b_sums, _ = _half_sums(right, False)
    seen = {}
    for idx, s in enumerate(a_sums):
        seen.setdefault(s, idx)
    for idx, s in enumerate(b_sums):
        hit = seen.get(-s)
        if hit is not None:
            witness = SignMask(hit | idx << h, r)
            if witness.bits & 1:
                # -eps vanishes too; report the one with eps_1 = +1
                witness = witness.complement()
            w._set_degeneracy(Degeneracy.DEGENERATE, witness)
            return w.degeneracy
    w._set_degeneracy(Degeneracy.NON_DEGENERATE, None)
    return w.degeneracy


def require_nondegenerate(w: WeightVector, what: str = "the weights") -> None:
    if find_vanishing(w) is Degeneracy.DEGENERATE:
        raise DegenerateInput(
            f"{what} form a degenerate vector: the sign vector {w.witness} gives a zero sum",
            w.witness,
        )


def _mitm_signsum(ints):
    left, right = _halves(ints)
    a_sums, a_par = _half_sums(left, False)
    b_sums, b_par = _half_sums(right, False)
    order = sorted(range(len(b_sums)), key=b_sums.__getitem__)
    b_sorted = [b_sums[k] for k in order]
    prefix = [0, *accumulate(b_par[k] for k in order)]
    total_b = prefix[-1]
    signsum = zeros = 0
    for s, p in zip(a_sums, a_par):
        i = bisect_left(b_sorted, -s)
        j = bisect_right(b_sorted, -s)
        # b ranks below i give s + b < 0, ranks from j give s + b > 0
        signsum += p * ((total_b - prefix[j]) - prefix[i])
        zeros += j - i
    return signsum, zeros


def alternating_sign_sum(
    w, permissive: bool = False, threads: int = 1, engine: str = "brute"
) -> int:
    """``sum over all eps of sgn(<eps, w>) * prod(eps)``.

    A zero inner product raises :class:`DegenerateInput` unless
    ``permissive`` is set, in which case ``sgn(0)`` counts as 0.
    """
    w = WeightVector.of(w)
    r = len(w)
    if not permissive:
        _check_size(r, MITM_MAX)
        require_nondegenerate(w)
    ints = list(w.normalized)
    if engine == "mitm":
        _check_size(r, MITM_MAX)
        signsum, zeros = _mitm_signsum(ints)
    else:
        _check_size(r, BRUTE_MAX)
        _, _, signsum, zeros = gray_walk_totals(ints, None, None, threads)
    if zeros and not permissive:
        raise CrossCheckFailure("Gray walk met a zero sum on weights classified nondegenerate")
    return signsum
