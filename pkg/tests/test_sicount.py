import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oracle_signed, oracle_signsum, oracle_unsigned
from signcount.errors import DegenerateInput, EmptyInterval, TooManyElements
from signcount.sicount import (
    Degeneracy,
    OpenInterval,
    WeightVector,
    alternating_sign_sum,
    find_vanishing,
    gray_walk_totals,
    pick_engine,
    resolve_threads,
    signed_count,
    signed_count_brute,
    signed_count_mitm,
    unsigned_count,
    unsigned_count_brute,
    unsigned_count_mitm,
)

ENGINES = [signed_count_brute, signed_count_mitm]


@pytest.mark.parametrize("count", ENGINES)
@pytest.mark.parametrize("ws,lo,hi,expected", [
    ((1, 2), 0, 4, 0),
    ((), -1, 1, 1),
    ((5,), -1, 7, 1),
    ((1, 1, 1, 1), -1, 1, 6),
])
def test_signed_examples(count, ws, lo, hi, expected):
    assert count(ws, OpenInterval(lo, hi)) == expected


@pytest.mark.parametrize("count", [unsigned_count_brute, unsigned_count_mitm])
@pytest.mark.parametrize("ws,lo,hi,expected", [
    ((1, 2), 0, 4, 2),
    ((), 1, 2, 0),
    ((5,), -6, 6, 2),
])
def test_unsigned_examples(count, ws, lo, hi, expected):
    assert count(ws, OpenInterval(lo, hi)) == expected


def test_endpoints_are_excluded():
    # sums of (1, 2) are 3, 1, -1, -3
    for count in ENGINES:
        assert count((1, 2), OpenInterval(1, 3)) == 0
        assert count((1, 2), OpenInterval(-1, 3)) == -1


def test_empty_interval_rejected():
    with pytest.raises(EmptyInterval):
        OpenInterval(2, 2)


@pytest.mark.parametrize("seed", range(12))
def test_engines_match_oracle(seed):
    rng = random.Random(seed)
    for r in range(0, 11):
        ws = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(r)]
        lo = Fraction(rng.randint(-30, 30), rng.randint(1, 3))
        hi = lo + Fraction(rng.randint(1, 40), rng.randint(1, 3))
        iv = OpenInterval(lo, hi)
        expected = oracle_signed(ws, lo, hi)
        assert signed_count_brute(ws, iv) == expected
        assert signed_count_mitm(ws, iv) == expected
        n = oracle_unsigned(ws, lo, hi)
        assert unsigned_count_brute(ws, iv) == n
        assert unsigned_count_mitm(ws, iv) == n


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(-20, 20), max_size=18),
    st.integers(-60, 60),
    st.integers(1, 80),
)
def test_engine_equivalence(ws, lo, width):
    iv = OpenInterval(lo, lo + width)
    assert signed_count_brute(ws, iv) == signed_count_mitm(ws, iv)
    assert unsigned_count_brute(ws, iv) == unsigned_count_mitm(ws, iv)


@pytest.mark.parametrize("bits", [70, 130])
def test_wide_weights(bits):
    # 70 bits: two-limb kernel and pure Python MITM; 130 bits: Python Gray walk
    rng = random.Random(bits)
    for _ in range(5):
        ws = [rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(9)]
        lo = rng.getrandbits(bits) - (1 << (bits - 1))
        hi = lo + rng.getrandbits(bits + 2) + 1
        iv = OpenInterval(lo, hi)
        expected = oracle_signed(ws, lo, hi)
        assert signed_count_brute(ws, iv) == expected
        assert signed_count_mitm(ws, iv) == expected
        assert unsigned_count_brute(ws, iv) == oracle_unsigned(ws, lo, hi)


def test_huge_bounds_are_clamped():
    ws = (3, 5, 7)
    assert signed_count_brute(ws, OpenInterval(-10**40, 10**40)) == oracle_signed(ws, -100, 100)
    assert signed_count_mitm(ws, OpenInterval(10**40, 10**41)) == 0
    assert signed_count_brute(ws, OpenInterval(-10**41, -10**40)) == 0


def test_parallel_blocks_identical():
    rng = random.Random(5)
    for bits in (20, 70, 130):
        ws = [rng.getrandbits(bits) for _ in range(16)]
        lo, hi = -(1 << bits), 5 << bits
        base = gray_walk_totals(ws, lo, hi, threads=1)
        for threads in (2, 3, 8):
            assert gray_walk_totals(ws, lo, hi, threads=threads) == base


class TestProperties:
    @pytest.mark.parametrize("seed", range(10))
    def test_antipodal_cancellation(self, seed):
        rng = random.Random(seed)
        r = rng.choice((1, 3, 5, 7, 9, 11))
        ws = [rng.randint(-10, 10) for _ in range(r)]
        c = Fraction(rng.randint(1, 50), rng.randint(1, 3))
        iv = OpenInterval(-c, c)
        assert signed_count_brute(ws, iv) == 0
        assert signed_count_mitm(ws, iv) == 0

    @pytest.mark.parametrize("seed", range(10))
    def test_homogeneity(self, seed):
        rng = random.Random(seed)
        ws = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(8)]
        lo = Fraction(rng.randint(-20, 0))
        hi = Fraction(rng.randint(1, 20))
        t = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        base = signed_count(ws, OpenInterval(lo, hi))
        scaled = [t * w for w in ws]
        assert signed_count(scaled, OpenInterval(t * lo, t * hi)) == base
        assert unsigned_count(scaled, OpenInterval(t * lo, t * hi)) == unsigned_count(ws, OpenInterval(lo, hi))


class TestAlternatingSum:
    @pytest.mark.parametrize("ws,expected", [((1, 1, 1), -4), ((1, 2, 4), 0), ((3, 4, 5), -4)])
    def test_examples(self, ws, expected):
        assert oracle_signsum(ws) == expected
        assert alternating_sign_sum(ws) == expected
        assert alternating_sign_sum(ws, engine="mitm") == expected

    def test_degenerate_rejected_with_witness(self):
        with pytest.raises(DegenerateInput) as exc:
            alternating_sign_sum((1, 2, 3))
        assert exc.value.witness.signs() == (1, 1, -1)

    def test_permissive_mode(self):
        # zero sums contribute 0; the other six give +1 -1 -1 -1 -1 +1
        assert alternating_sign_sum((1, 2, 3), permissive=True) == -2
        assert alternating_sign_sum((1, 1), permissive=True) == alternating_sign_sum((1, 1), permissive=True, engine="mitm")

    @pytest.mark.parametrize("seed", range(15))
    def test_random_against_oracle(self, seed):
        rng = random.Random(seed)
        r = rng.randint(1, 11)
        while True:
            ws = [Fraction(rng.randint(-40, 40), rng.randint(1, 3)) for _ in range(r)]
            if find_vanishing(ws) is Degeneracy.NON_DEGENERATE:
                break
        expected = oracle_signsum(ws)
        assert alternating_sign_sum(ws) == expected
        assert alternating_sign_sum(ws, engine="mitm") == expected
        flipped = [-ws[0], *ws[1:]]
        assert alternating_sign_sum(flipped) == -expected
        shuffled = ws[:]
        rng.shuffle(shuffled)
        assert alternating_sign_sum(shuffled) == expected

    def test_threads_identical(self):
        rng = random.Random(21)
        ws = [rng.getrandbits(60) for _ in range(21)]
        base = alternating_sign_sum(ws)
        assert base == alternating_sign_sum(ws, engine="mitm")
        for threads in (2, 4, 7):
            assert alternating_sign_sum(ws, threads=threads) == base


class TestFindVanishing:
    def test_examples(self):
        assert find_vanishing((1, 2, 3)) is Degeneracy.DEGENERATE
        assert find_vanishing((1, 2, 4)) is Degeneracy.NON_DEGENERATE
        w = WeightVector((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
        assert find_vanishing(w) is Degeneracy.DEGENERATE
        s = w.witness.signs()
        assert sum(e * x for e, x in zip(s, w.weights)) == 0

    def test_empty_vector_is_degenerate(self):
        assert find_vanishing(()) is Degeneracy.DEGENERATE

    def test_cached_once(self):
        w = WeightVector((1, 2, 4))
        find_vanishing(w)
        assert w.degeneracy is Degeneracy.NON_DEGENERATE
        w._set_degeneracy(Degeneracy.DEGENERATE, None)
        assert w.degeneracy is Degeneracy.NON_DEGENERATE

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_enumeration(self, seed):
        rng = random.Random(seed)
        r = rng.randint(1, 12)
        ws = [rng.randint(-12, 12) for _ in range(r)]
        w = WeightVector(tuple(ws))
        status = find_vanishing(w)
        from itertools import product
        has_zero = any(sum(e * x for e, x in zip(eps, ws)) == 0 for eps in product((1, -1), repeat=r))
        assert (status is Degeneracy.DEGENERATE) == has_zero
        if has_zero:
            assert sum(e * x for e, x in zip(w.witness.signs(), ws)) == 0
            assert w.witness.signs()[0] == 1


def test_normalization():
    w = WeightVector((Fraction(1, 2), Fraction(2, 3), 3))
    assert w.scale == 6
    assert w.normalized == (3, 4, 18)
    assert all(Fraction(n, w.scale) == x for n, x in zip(w.normalized, w.weights))
    assert w.delete(1).weights == (Fraction(1, 2), Fraction(3))


def test_guardrails():
    with pytest.raises(TooManyElements):
        signed_count_brute([1] * 31, OpenInterval(0, 1))
    with pytest.raises(TooManyElements):
        signed_count_mitm([1] * 51, OpenInterval(0, 1))


def test_auto_engine():
    assert pick_engine(23) == "brute"
    assert pick_engine(24) == "mitm"
    ws = list(range(1, 26))
    iv = OpenInterval(-3, 40)
    assert signed_count(ws, iv) == signed_count_mitm(ws, iv)


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("SIGNCOUNT_THREADS", raising=False)
    assert resolve_threads(None) == 1
    assert resolve_threads("3") == 3
    monkeypatch.setenv("SIGNCOUNT_THREADS", "5")
    assert resolve_threads("3") == 5
