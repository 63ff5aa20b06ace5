"""Pair invariants of a weight vector ``alpha`` of length ``m >= 3``.

For a pair ``i != j`` (0-based here, 1-based in all user-facing output) the
remaining entries ``alpha_ij`` are summed against sign vectors and counted
with parity weight inside an open interval:

* ``n_ij``     -- interval ``(|a_i - a_j|, a_i + a_j)``, positive alpha only;
* ``n_cal_ij`` -- interval ``(a_i - |a_j|, a_i + |a_j|)``, times ``sgn(a_j)``,
  any nondegenerate alpha.

For odd ``m`` both equal ``h(alpha) = -1/4 * sum sgn(<eps, alpha>) prod(eps)``
for every pair.  The count of the first interval has a pair-independent
parity for every ``m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CrossCheckFailure,
    EqualIndices,
    EvenM,
    IndexOutOfRange,
    InvalidInput,
    NonPositiveEntry,
    NotDivisibleByFour,
)
from .exactnum import format_rational, sign
from .sicount import (
    OpenInterval,
    WeightVector,
    alternating_sign_sum,
    require_nondegenerate,
    signed_count,
    unsigned_count,
)


@dataclass
class AlphaInstance:
    alpha: WeightVector
    engine: str = "auto"
    threads: int = 1

    def __post_init__(self):
        self.alpha = WeightVector.of(self.alpha)
        if len(self.alpha) < 3:
            raise InvalidInput(f"need at least 3 weights, got {len(self.alpha)}")

    @classmethod
    def of(cls, values, **kw) -> "AlphaInstance":
        if isinstance(values, AlphaInstance):
            return values
        return cls(WeightVector.of(values), **kw)

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def positive(self) -> bool:
        return all(a > 0 for a in self.alpha.weights)

    def reduced(self, i: int, j: int) -> WeightVector:
        return self.alpha.delete(i, j)


def _check_pair(a: AlphaInstance, i: int, j: int) -> None:
    for x in (i, j):
        if not 0 <= x < a.m:
            raise IndexOutOfRange(f"index {x + 1} outside 1..{a.m}")
    if i == j:
        raise EqualIndices(f"i and j must differ (both {i + 1})")


def _plain_interval(a: AlphaInstance, i: int, j: int) -> OpenInterval:
    if not a.positive:
        bad = next(k for k, x in enumerate(a.alpha.weights) if x <= 0)
        raise NonPositiveEntry(f"alpha_{bad + 1} = {format_rational(a.alpha.weights[bad])} is not positive")
    ai, aj = a.alpha.weights[i], a.alpha.weights[j]
    return OpenInterval(abs(ai - aj), ai + aj)


def n_ij(a, i: int, j: int) -> int:
    a = AlphaInstance.of(a)
    _check_pair(a, i, j)
    iv = _plain_interval(a, i, j)
    require_nondegenerate(a.alpha, "alpha")
    return signed_count(a.reduced(i, j), iv, a.engine, a.threads)


def s_cardinality(a, i: int, j: int) -> int:
    a = AlphaInstance.of(a)
    _check_pair(a, i, j)
    iv = _plain_interval(a, i, j)
    require_nondegenerate(a.alpha, "alpha")
    return unsigned_count(a.reduced(i, j), iv, a.engine, a.threads)


def s_parity(a, i: int, j: int) -> int:
    return s_cardinality(a, i, j) % 2


def n_cal_ij(a, i: int, j: int) -> int:
    a = AlphaInstance.of(a)
    _check_pair(a, i, j)
    require_nondegenerate(a.alpha, "alpha")
    ai, aj = a.alpha.weights[i], a.alpha.weights[j]
    if aj == 0:
        return 0
    iv = OpenInterval(ai - abs(aj), ai + abs(aj))
    return sign(aj) * signed_count(a.reduced(i, j), iv, a.engine, a.threads)


def s_cal_cardinality(a, i: int, j: int) -> int:
    """Size of the calligraphic solution set; reported, never asserted on."""
    a = AlphaInstance.of(a)
    _check_pair(a, i, j)
    require_nondegenerate(a.alpha, "alpha")
    ai, aj = a.alpha.weights[i], a.alpha.weights[j]
    if aj == 0:
        return 0
    iv = OpenInterval(ai - abs(aj), ai + abs(aj))
    return unsigned_count(a.reduced(i, j), iv, a.engine, a.threads)


def h_alpha(a) -> int:
    a = AlphaInstance.of(a)
    if a.m % 2 == 0:
        raise EvenM(f"h(alpha) is only defined for odd m, got m = {a.m}")
    engine = "mitm" if a.engine == "mitm" else "brute"
    total = alternating_sign_sum(a.alpha, threads=a.threads, engine=engine)
    if total % 4:
        raise NotDivisibleByFour(f"alternating sign sum {total} is not divisible by 4")
    return -total // 4


@dataclass
class PairRow:
    i: int
    j: int
    value: int
    cardinality: int | None
    parity: int | None


@dataclass
class InvariantReport:
    m: int
    mode: str
    rows: list[PairRow]
    h: int | None = None
    all_equal: bool = field(init=False)
    common_value: int | None = field(init=False)
    parity_constant: bool | None = field(init=False)

    def __post_init__(self):
        self.refresh()

    def refresh(self) -> None:
        values = {r.value for r in self.rows}
        self.all_equal = len(values) == 1
        self.common_value = values.pop() if self.all_equal else None
        parities = {r.parity for r in self.rows}
        self.parity_constant = None if None in parities else len(parities) == 1

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "mode": self.mode,
            "pairs": [
                {"i": r.i + 1, "j": r.j + 1, "value": r.value, "cardinality": r.cardinality, "parity": r.parity}
                for r in self.rows
            ],
            "summary": {
                "all_equal": self.all_equal,
                "common_value": self.common_value,
                "parity_constant": self.parity_constant,
                "h": self.h,
            },
        }


def all_pairs_report(a, mode: str = "plain") -> InvariantReport:
    """Per ordered pair values, the summary flags, and ``h`` when ``m`` is odd.

    In calligraphic mode with odd ``m`` the table must agree with ``h``; a
    mismatch raises :class:`CrossCheckFailure`.
    """
    a = AlphaInstance.of(a)
    if mode not in ("plain", "calligraphic"):
        raise InvalidInput(f"unknown mode {mode!r}")
    require_nondegenerate(a.alpha, "alpha")
    rows = []
    for i in range(a.m):
        for j in range(a.m):
            if i == j:
                continue
            if mode == "plain":
                card = s_cardinality(a, i, j)
                rows.append(PairRow(i, j, n_ij(a, i, j), card, card % 2))
            else:
                card = s_cal_cardinality(a, i, j)
                rows.append(PairRow(i, j, n_cal_ij(a, i, j), card, card % 2))
    h = h_alpha(a) if a.m % 2 else None
    report = InvariantReport(a.m, mode, rows, h)
    if h is not None and mode == "calligraphic" and not (report.all_equal and report.common_value == h):
        bad = next(r for r in rows if r.value != h)
        raise CrossCheckFailure(
            f"calligraphic N_{bad.i + 1},{bad.j + 1} = {bad.value} differs from h(alpha) = {h}"
        )
    return report
