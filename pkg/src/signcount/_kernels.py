"""Compiled inner loops.

Running sums are held exactly as two int64 limbs ``hi * 2**62 + lo`` with
``0 <= lo < 2**62``, so values up to about 2**124 in magnitude are exact
without touching Python integers.  Callers split values with ``split``.
"""
import numpy as np
from numba import njit

LIMB_BITS = 62
LIMB = 1 << LIMB_BITS
LIMB_MASK = LIMB - 1
# magnitudes below this stay inside the two-limb range through every add
FAST_BOUND = 1 << 120


def split(x: int) -> tuple[int, int]:
    return x >> LIMB_BITS, x & LIMB_MASK


def split_array(values) -> tuple[np.ndarray, np.ndarray]:
    hi = np.array([v >> LIMB_BITS for v in values], dtype=np.int64)
    lo = np.array([v & LIMB_MASK for v in values], dtype=np.int64)
    return hi, lo


@njit(cache=True, nogil=True)
def _ctz(i):
    k = 0
    while i & 1 == 0:
        i >>= 1
        k += 1
    return k


@njit(cache=True, nogil=True)
def gray_walk(step_hi, step_lo, nbits, s_hi, s_lo, parity, a_hi, a_lo, b_hi, b_lo):
    """Walk all ``2**nbits`` sign patterns of the low bits in Gray order.

    The walk starts with every low bit clear (all ``+1``) at running sum
    ``s`` and parity ``parity``.  ``step`` holds ``2 * w_k``.  Returns
    ``(signed, unsigned, signsum, zeros)`` where the first two count states
    with ``a < s < b`` and the last two accumulate ``sgn(s) * parity`` and
    the number of exact zeros.
    """
    signed = 0
    unsigned = 0
    signsum = 0
    zeros = 0
    cur = 0
    n = 1 << nbits
    for i in range(n):
        if i:
            k = _ctz(i)
            bit = 1 << k
            if cur & bit:
                s_lo += step_lo[k]
                s_hi += step_hi[k]
                if s_lo >= 4611686018427387904:
                    s_lo -= 4611686018427387904
                    s_hi += 1
            else:
                s_lo -= step_lo[k]
                s_hi -= step_hi[k]
                if s_lo < 0:
                    s_lo += 4611686018427387904
                    s_hi -= 1
            cur ^= bit
            parity = -parity
        if s_hi > 0 or (s_hi == 0 and s_lo > 0):
            signsum += parity
        elif s_hi == 0 and s_lo == 0:
            zeros += 1
        else:
            signsum -= parity
        if (a_hi < s_hi or (a_hi == s_hi and a_lo < s_lo)) and (
            s_hi < b_hi or (s_hi == b_hi and s_lo < b_lo)
        ):
            signed += parity
            unsigned += 1
    return signed, unsigned, signsum, zeros


@njit(cache=True, nogil=True)
def divisor_walk(primes, threshold):
    """Sum of ``mu(d) * sgn(d - threshold - 1/2)`` over divisors ``d`` of ``prod(primes)``.

    That is ``+mu(d)`` when ``d > threshold`` and ``-mu(d)`` otherwise.  The
    divisor is updated by one multiplication or exact division per step.
    ``prod(primes)`` must fit in int64.
    """
    total = 0
    d = 1
    mu = 1
    cur = 0
    n = 1 << primes.shape[0]
    for i in range(n):
        if i:
            k = _ctz(i)
            bit = 1 << k
            if cur & bit:
                d //= primes[k]
            else:
                d *= primes[k]
            cur ^= bit
            mu = -mu
        if d > threshold:
            total += mu
        else:
            total -= mu
    return total


@njit(cache=True, nogil=True)
def pruned_divisor_mobius(primes, limit):
    """Sum of ``mu(d)`` over squarefree ``d <= limit`` built from ``primes``.

    ``primes`` must be sorted ascending.  Depth-first over prime subsets in
    increasing order; once ``prod * p`` exceeds ``limit`` every later prime
    does too, so the rest of that branch is cut.
    """
    k = primes.shape[0]
    idx = np.empty(k + 1, dtype=np.int64)
    prod = np.empty(k + 1, dtype=np.int64)
    sgn = np.empty(k + 1, dtype=np.int64)
    total = 1
    top = 0
    idx[0] = 0
    prod[0] = 1
    sgn[0] = 1
    while top >= 0:
        i = idx[top]
        if i >= k:
            top -= 1
            continue
        p = primes[i]
        idx[top] = i + 1
        if prod[top] > limit // p:
            top -= 1
            continue
        nxt = prod[top] * p
        s = -sgn[top]
        total += s
        top += 1
        idx[top] = i + 1
        prod[top] = nxt
        sgn[top] = s
    return total
