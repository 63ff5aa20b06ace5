import random
from fractions import Fraction

import pytest

from conftest import oracle_signed, oracle_signsum, oracle_unsigned
from signcount.errors import (
    DegenerateInput,
    EqualIndices,
    EvenM,
    IndexOutOfRange,
    InvalidInput,
    NonPositiveEntry,
)
from signcount.invariants import (
    AlphaInstance,
    all_pairs_report,
    h_alpha,
    n_cal_ij,
    n_ij,
    s_cal_cardinality,
    s_cardinality,
    s_parity,
)
from signcount.sicount import Degeneracy, find_vanishing


def pairs(m):
    return [(i, j) for i in range(m) for j in range(m) if i != j]


def nondegenerate(rng, m, positive, zero_at=None):
    while True:
        a = [Fraction(rng.randint(1, 60), rng.randint(1, 5)) for _ in range(m)]
        if not positive:
            a = [x if rng.random() < 0.5 else -x for x in a]
        if zero_at is not None:
            a[zero_at] = Fraction(0)
        if find_vanishing(a) is Degeneracy.NON_DEGENERATE:
            return a


def plain_oracle(a, i, j):
    rest = [x for k, x in enumerate(a) if k not in (i, j)]
    return oracle_signed(rest, abs(a[i] - a[j]), a[i] + a[j])


class TestExamples:
    def test_n_ij(self):
        assert n_ij((1, 1, 1), 0, 1) == 1
        assert all(n_ij((1, 2, 4), i, j) == 0 for i, j in pairs(3))
        assert n_ij((3, 4, 5), 0, 1) == 1

    def test_n_cal_ij(self):
        assert n_cal_ij((1, 1, 1), 0, 1) == 1
        assert n_cal_ij((7, 11, 13), 0, 1) == 1
        assert n_cal_ij((7, 0, 13), 0, 1) == 0

    def test_h_alpha(self):
        assert h_alpha((1, 1, 1)) == 1
        assert h_alpha((3, 4, 5)) == 1
        assert h_alpha((1, 2, 4)) == 0

    def test_parity(self):
        assert all(s_parity((1, 2, 3, 5), i, j) == 1 for i, j in pairs(4))
        assert all(s_cardinality((1, 2, 3, 5), i, j) == 1 for i, j in pairs(4))
        assert all(s_cardinality((1, 2, 4, 8), i, j) == 0 for i, j in pairs(4))
        assert all(s_parity((1, 1, 1), i, j) == 1 for i, j in pairs(3))

    def test_report_calligraphic(self):
        rep = all_pairs_report((1, 1, 1), "calligraphic")
        assert [r.value for r in rep.rows] == [1] * 6
        assert rep.all_equal and rep.common_value == 1 and rep.h == 1

    def test_report_even_plain(self):
        rep = all_pairs_report((1, 2, 4, 8), "plain")
        assert {r.parity for r in rep.rows} == {0}
        assert rep.parity_constant is True
        assert rep.h is None

    def test_both_modes_coincide(self):
        plain = all_pairs_report((3, 4, 5), "plain")
        cal = all_pairs_report((3, 4, 5), "calligraphic")
        assert [r.value for r in plain.rows] == [r.value for r in cal.rows]


class TestErrors:
    def test_non_positive(self):
        with pytest.raises(NonPositiveEntry):
            n_ij((1, -2, 4), 0, 1)
        with pytest.raises(NonPositiveEntry):
            s_parity((1, 0, 4), 0, 2)

    def test_degenerate(self):
        with pytest.raises(DegenerateInput) as exc:
            n_ij((1, 2, 3), 0, 1)
        assert str(exc.value.witness) == "(+1,+1,-1)"
        with pytest.raises(DegenerateInput):
            h_alpha((1, 2, 3))

    def test_indices(self):
        with pytest.raises(IndexOutOfRange):
            n_ij((1, 1, 1), 0, 3)
        with pytest.raises(EqualIndices):
            n_cal_ij((1, 1, 1), 1, 1)

    def test_even_m(self):
        with pytest.raises(EvenM):
            h_alpha((1, 2, 4, 8))

    def test_too_short(self):
        with pytest.raises(InvalidInput):
            AlphaInstance.of((1, 2))

    def test_unknown_mode(self):
        with pytest.raises(InvalidInput):
            all_pairs_report((1, 1, 1), "other")


@pytest.mark.parametrize("seed", range(30))
def test_odd_positive_all_equal(seed):
    rng = random.Random(seed)
    m = (3, 5, 7)[seed % 3]
    a = nondegenerate(rng, m, positive=True)
    h = h_alpha(a)
    assert h == -oracle_signsum(a) // 4
    for i, j in pairs(m):
        v = n_ij(a, i, j)
        assert v == h
        assert n_cal_ij(a, i, j) == v
    assert plain_oracle(a, 0, 1) == h


@pytest.mark.parametrize("seed", range(30))
def test_odd_signed_calligraphic_equal(seed):
    rng = random.Random(1000 + seed)
    m = (3, 5, 7)[seed % 3]
    a = nondegenerate(rng, m, positive=False)
    rep = all_pairs_report(a, "calligraphic")
    assert rep.all_equal and rep.common_value == h_alpha(a)


@pytest.mark.parametrize("seed", range(20))
def test_positive_cal_matches_plain_odd_m(seed):
    rng = random.Random(2000 + seed)
    m = rng.choice((3, 5, 7, 9))
    a = nondegenerate(rng, m, positive=True)
    for i, j in pairs(m):
        assert n_cal_ij(a, i, j) == n_ij(a, i, j) == plain_oracle(a, i, j)


def test_positive_cal_can_differ_for_even_m():
    # the two intervals differ by (-c, c) with c = |a_i - a_j|; signed counts
    # over a symmetric interval only cancel when m - 2 is odd
    rng = random.Random(2008)
    m = rng.randint(3, 8)
    a = nondegenerate(rng, m, positive=True)
    assert m == 4
    diffs = [(i, j) for i, j in pairs(m) if n_cal_ij(a, i, j) != n_ij(a, i, j)]
    assert diffs
    for i, j in diffs:
        rest = [x for k, x in enumerate(a) if k not in (i, j)]
        c = abs(a[i] - a[j])
        assert n_cal_ij(a, i, j) - n_ij(a, i, j) == oracle_signed(rest, -c, c)


@pytest.mark.parametrize("seed", range(20))
def test_parity_constant(seed):
    rng = random.Random(3000 + seed)
    m = rng.randint(3, 8)
    a = nondegenerate(rng, m, positive=True)
    rest = lambda i, j: [x for k, x in enumerate(a) if k not in (i, j)]
    cards = {
        (i, j): oracle_unsigned(rest(i, j), abs(a[i] - a[j]), a[i] + a[j]) for i, j in pairs(m)
    }
    assert all(s_cardinality(a, i, j) == c for (i, j), c in cards.items())
    assert len({c % 2 for c in cards.values()}) == 1


@pytest.mark.parametrize("seed", range(10))
def test_zero_entry_gives_zero(seed):
    rng = random.Random(4000 + seed)
    m = (3, 5, 7)[seed % 3]
    k = rng.randrange(m)
    a = nondegenerate(rng, m, positive=False, zero_at=k)
    rest = [x for idx, x in enumerate(a) if idx != k]
    assert find_vanishing(rest) is Degeneracy.NON_DEGENERATE
    assert h_alpha(a) == 0
    assert all(n_cal_ij(a, i, k) == 0 for i in range(m) if i != k)


@pytest.mark.parametrize("seed", range(10))
def test_symmetries(seed):
    rng = random.Random(5000 + seed)
    m = (3, 5, 7)[seed % 3]
    a = nondegenerate(rng, m, positive=False)
    h = h_alpha(a)
    k = rng.randrange(m)
    flipped = [-x if idx == k else x for idx, x in enumerate(a)]
    assert h_alpha(flipped) == -h
    shuffled = a[:]
    rng.shuffle(shuffled)
    assert h_alpha(shuffled) == h
    t = Fraction(rng.randint(1, 50), rng.randint(1, 50))
    assert h_alpha([t * x for x in a]) == h


def test_duplicates_are_an_indexed_family():
    # the two equal entries are distinct positions
    a = (2, 2, 3, 7, 11)
    assert find_vanishing(a) is Degeneracy.NON_DEGENERATE
    assert {n_ij(a, i, j) for i, j in pairs(5)} == {h_alpha(a)}


def test_calligraphic_cardinality_reported():
    a = (5, -7, 11)
    assert s_cal_cardinality(a, 0, 1) == oracle_unsigned([11], 5 - 7, 5 + 7)


def test_report_json_shape():
    d = all_pairs_report((3, 4, 5), "plain").to_dict()
    assert d["pairs"][0]["i"] == 1 and d["pairs"][0]["j"] == 2
    assert d["summary"] == {"all_equal": True, "common_value": 1, "parity_constant": True, "h": 1}
