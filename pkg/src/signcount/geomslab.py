"""Signed counts of sign-vector sums of points in Q^n lying in a slab.

The points ``alpha_1..alpha_m`` are projected onto a normal direction
``n``; the projection ``a_k = <alpha_k, n>`` turns the slab between the
hyperplanes through ``alpha_i - alpha_j`` and ``alpha_i + alpha_j`` into the
open interval between ``a_i - a_j`` and ``a_i + a_j``.  A normal is valid
when no signed sum of the points projects to zero and no point projects to
zero.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    CrossCheckFailure,
    DegeneratePointSet,
    DegenerateProjection,
    EqualIndices,
    EvenM,
    IndexOutOfRange,
    InvalidInput,
    NoValidDirectionFound,
    ParseError,
    ZeroNormal,
)
from .exactnum import format_rational, lcm_of_denominators, parse_rational, sign
from .invariants import h_alpha
from .sicount import Degeneracy, OpenInterval, WeightVector, find_vanishing, signed_count
from .signspace import EvenMapOracle, Evenness, SignMask

Point = tuple[Fraction, ...]


def _points(points: Sequence[Sequence]) -> tuple[Point, ...]:
    pts = tuple(tuple(parse_rational(c) for c in p) for p in points)
    if len(pts) < 3:
        raise InvalidInput(f"need at least 3 points, got {len(pts)}")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise InvalidInput(f"points have mixed dimensions {sorted(dims)}")
    if dims.pop() < 2:
        raise InvalidInput("points must live in dimension n >= 2")
    return pts


@dataclass(frozen=True)
class SlabInstance:
    points: tuple[Point, ...]
    normal: Point
    projections: WeightVector = field(compare=False)

    @property
    def m(self) -> int:
        return len(self.points)


def _dot(p: Point, q: Point) -> Fraction:
    return sum((x * y for x, y in zip(p, q)), Fraction(0))


def validate_normal(points, candidate) -> SlabInstance:
    pts = _points(points)
    normal = tuple(parse_rational(c) for c in candidate)
    if len(normal) != len(pts[0]):
        raise InvalidInput(f"normal has dimension {len(normal)}, points have {len(pts[0])}")
    if all(c == 0 for c in normal):
        raise ZeroNormal("the normal vector is zero")
    proj = WeightVector(tuple(_dot(p, normal) for p in pts))
    if find_vanishing(proj) is Degeneracy.DEGENERATE:
        raise DegenerateProjection(
            f"signed sum {proj.witness} of the points projects to 0 along {_fmt(normal)}",
            proj.witness,
        )
    zero = [k for k, a in enumerate(proj.weights) if a == 0]
    if zero:
        raise DegenerateProjection(f"point {zero[0] + 1} projects to 0 along {_fmt(normal)}")
    return SlabInstance(pts, normal, proj)


def _fmt(v) -> str:
    return "(" + ",".join(format_rational(x) for x in v) + ")"


def vanishing_point_sum(points) -> SignMask | None:
    """A sign vector whose signed sum of points is the zero vector, if any."""
    pts = _points(points)
    m = len(pts)
    scale = lcm_of_denominators(c for p in pts for c in p)
    ints = [tuple(int(c * scale) for c in p) for p in pts]
    h = (m + 1) // 2

    def half(rows):
        sums = [tuple(0 for _ in ints[0])]
        for row in rows:
            plus = [tuple(a + b for a, b in zip(s, row)) for s in sums]
            minus = [tuple(a - b for a, b in zip(s, row)) for s in sums]
            sums = plus + minus
        return sums

    seen = {}
    for idx, s in enumerate(half(ints[:h])):
        seen.setdefault(s, idx)
    for idx, s in enumerate(half(ints[h:])):
        hit = seen.get(tuple(-x for x in s))
        if hit is not None:
            mask = SignMask(hit | idx << h, m)
            return mask.complement() if mask.bits & 1 else mask
    return None


def find_normal(points, seed: int = 0, max_tries: int = 4096) -> SlabInstance:
    """Seeded search for a valid integer normal.

    Coordinates are uniform in ``[-B, B]``; ``B`` starts at 8 and doubles
    after every 16 rejected candidates.
    """
    pts = _points(points)
    witness = vanishing_point_sum(pts)
    if witness is not None:
        raise DegeneratePointSet(
            f"the signed sum {witness} of the points is the zero vector; no normal can work",
            witness,
        )
    rng = random.Random(seed)
    bound = 8
    failures = 0
    for _ in range(max_tries):
        cand = [rng.randint(-bound, bound) for _ in pts[0]]
        try:
            return validate_normal(pts, cand)
        except (ZeroNormal, DegenerateProjection):
            failures += 1
            if failures % 16 == 0:
                bound *= 2
    raise NoValidDirectionFound(f"no valid normal in {max_tries} tries (seed {seed})")


def slab_interval(inst: SlabInstance, i: int, j: int) -> OpenInterval:
    a = inst.projections.weights
    lo, hi = sorted((a[i] - a[j], a[i] + a[j]))
    return OpenInterval(lo, hi)


def m_ij(inst: SlabInstance, i: int, j: int, engine: str = "auto") -> int:
    """Weighted count of reduced signed sums strictly inside the slab (0-based pair)."""
    for x in (i, j):
        if not 0 <= x < inst.m:
            raise IndexOutOfRange(f"index {x + 1} outside 1..{inst.m}")
    if i == j:
        raise EqualIndices(f"i and j must differ (both {i + 1})")
    return signed_count(inst.projections.delete(i, j), slab_interval(inst, i, j), engine)


def slab_sigma(inst: SlabInstance) -> EvenMapOracle:
    """``sigma(A) = sgn(<n, eps B>) * prod(eps)`` on subsets of the points."""
    a = inst.projections.normalized
    m = inst.m

    def sigma(bits: int) -> int:
        s = sum(-x if bits >> k & 1 else x for k, x in enumerate(a))
        par = -1 if bits.bit_count() & 1 else 1
        return par if s > 0 else -par

    # structurally even for odd m; not even for even m
    return EvenMapOracle(m, sigma, Evenness.ASSUMED)


@dataclass
class SlabReport:
    h: int
    c: int
    table: dict[tuple[int, int], int]
    expected_sign: dict[tuple[int, int], int]
    abs_constant: bool
    projections: tuple[Fraction, ...]

    def to_dict(self) -> dict:
        return {
            "projections": [format_rational(a) for a in self.projections],
            "h": self.h,
            "c": self.c,
            "abs_constant": self.abs_constant,
            "pairs": [
                {"i": i + 1, "j": j + 1, "M": v, "expected": self.expected_sign[i, j]}
                for (i, j), v in self.table.items()
            ],
        }


def slab_report(inst: SlabInstance, engine: str = "auto") -> SlabReport:
    """Tabulate every ordered pair and check ``M(i,j) == -sgn(a_j) * c``.

    ``c = -h(projections)`` is the common value of ``N_sigma``; the
    magnitude of ``M`` is then pair independent while its sign follows
    ``a_j``.
    """
    if inst.m % 2 == 0:
        raise EvenM(f"the slab map is even only for odd m, got m = {inst.m}")
    h = h_alpha(inst.projections)
    c = -h
    a = inst.projections.weights
    table, expected = {}, {}
    for i in range(inst.m):
        for j in range(inst.m):
            if i != j:
                table[i, j] = m_ij(inst, i, j, engine)
                expected[i, j] = -sign(a[j]) * c
    bad = [(p, v) for p, v in table.items() if v != expected[p]]
    if bad:
        (i, j), v = bad[0]
        raise CrossCheckFailure(f"M({i + 1},{j + 1}) = {v}, expected {expected[i, j]} = -sgn(a_{j + 1})*c")
    return SlabReport(h, c, table, expected, len({abs(v) for v in table.values()}) == 1, a)


def load_points(path) -> list[list[Fraction]]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read points file {path}: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("points"), list):
        raise ParseError("points file must be an object with a 'points' list")
    return [[parse_rational(c) for c in row] for row in data["points"]]


def random_slab_instance(rng: random.Random, m: int, n: int, coord: int = 20) -> SlabInstance:
    """Random rational points with a valid normal found from ``rng``."""
    while True:
        pts = [
            [Fraction(rng.randint(-coord, coord), rng.randint(1, 4)) for _ in range(n)]
            for _ in range(m)
        ]
        if any(all(c == 0 for c in p) for p in pts):
            continue
        try:
            return find_normal(pts, seed=rng.getrandbits(32))
        except (DegeneratePointSet, NoValidDirectionFound):
            continue
