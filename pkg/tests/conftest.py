"""Shared brute-force oracles.

These enumerate with ``itertools.product`` over explicit sign tuples and
exact ``Fraction`` sums, sharing no code with the library's engines.
"""
from fractions import Fraction
from itertools import product
from math import prod

ACCEPTANCE_LINES = []


def sign_vectors(r):
    return product((1, -1), repeat=r)


def oracle_signed(ws, lo, hi):
    ws = [Fraction(w) for w in ws]
    total = 0
    for eps in sign_vectors(len(ws)):
        s = sum((e * w for e, w in zip(eps, ws)), Fraction(0))
        if Fraction(lo) < s < Fraction(hi):
            total += prod(eps)
    return total


def oracle_unsigned(ws, lo, hi):
    ws = [Fraction(w) for w in ws]
    return sum(
        1
        for eps in sign_vectors(len(ws))
        if Fraction(lo) < sum((e * w for e, w in zip(eps, ws)), Fraction(0)) < Fraction(hi)
    )


def oracle_signsum(ws):
    ws = [Fraction(w) for w in ws]
    total = 0
    for eps in sign_vectors(len(ws)):
        s = sum((e * w for e, w in zip(eps, ws)), Fraction(0))
        assert s != 0
        total += (1 if s > 0 else -1) * prod(eps)
    return total


def oracle_slab(points, normal, i, j):
    """Weighted count of signed point sums strictly between the two hyperplanes."""
    pts = [tuple(Fraction(c) for c in p) for p in points]
    nrm = tuple(Fraction(c) for c in normal)

    def dot(p):
        return sum((x * y for x, y in zip(p, nrm)), Fraction(0))

    ends = (
        dot([a - b for a, b in zip(pts[i], pts[j])]),
        dot([a + b for a, b in zip(pts[i], pts[j])]),
    )
    lo, hi = min(ends), max(ends)
    rest = [p for k, p in enumerate(pts) if k not in (i, j)]
    total = 0
    for eps in sign_vectors(len(rest)):
        point = [sum(e * p[c] for e, p in zip(eps, rest)) for c in range(len(nrm))]
        if lo < dot(point) < hi:
            total += prod(eps)
    return total


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
