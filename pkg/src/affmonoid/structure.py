"""Idempotents, invertibility, nilpotency and group-like powers of catalog monoids.

Catalog monoids are written in coordinates where the maximal torus acts
diagonally on the torus block, so their idempotents all have 0/1
coordinates and the group of invertible elements is cut out by the
nonvanishing of the torus-block coordinates.  Both facts are read off the
family metadata; nothing here solves general polynomial systems.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .monoids import MonoidStructure, Point, multiply


class MissingMetadata(ValueError):
    """The operation needs the family descriptor of a catalog monoid."""


class WrongFamily(ValueError):
    pass


def _pt(p: Sequence) -> Point:
    return tuple(Fraction(v) for v in p)


@dataclass(frozen=True)
class IdempotentSet:
    points: tuple[Point, ...]
    complete: bool

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {"count": len(self.points), "complete": self.complete,
                "points": [[str(v) for v in p] for p in self.points]}


def is_idempotent(S: MonoidStructure, e: Sequence) -> bool:
    e = _pt(e)
    return multiply(S, e, e) == e


def idempotents(S: MonoidStructure) -> IdempotentSet:
    """Scan the 2^n points with 0/1 coordinates; complete only for catalog monoids."""
    pts = tuple(_pt(e) for e in itertools.product((0, 1), repeat=S.dim) if is_idempotent(S, e))
    return IdempotentSet(pts, S.family is not None)


def _rank(S: MonoidStructure) -> int:
    if S.family is None or S.family.rank is None:
        raise MissingMetadata("rank is unknown: no catalog family metadata")
    return S.family.rank


@dataclass(frozen=True)
class BoundReport:
    rank: int
    count: int
    lower_bound: int
    exact_expected: bool
    holds: bool

    def to_json(self) -> dict:
        return {"rank": self.rank, "count": self.count, "lower_bound": self.lower_bound,
                "exact_expected": self.exact_expected, "holds": self.holds}


def check_idempotent_bound(S: MonoidStructure) -> BoundReport:
    """At least 2^r idempotents, and exactly 2^r when r <= 2."""
    r = _rank(S)
    count = len(idempotents(S))
    exact = r <= 2
    holds = count >= 2 ** r and (not exact or count == 2 ** r)
    return BoundReport(r, count, 2 ** r, exact, holds)


def _torus(S: MonoidStructure) -> tuple[int, ...] | None:
    if S.family is None:
        raise MissingMetadata("invertibility needs catalog family metadata")
    return S.family.torus


def left_multiplication_matrix(S: MonoidStructure, p: Sequence) -> list[list[Fraction]]:
    """Matrix of y -> p*y; the product must be linear in y."""
    n = S.dim
    R = S.ring
    fixed = {f"x{i + 1}": R.const(Fraction(v)) for i, v in enumerate(p)}
    rows = []
    for comp in S.components:
        q = comp.substitute(fixed, R)
        row = [Fraction(0)] * n
        for exps, c in q.items():
            ys = exps[n:]
            if sum(ys) != 1 or any(exps[:n]):
                raise MissingMetadata("product is not linear in y; torus block required")
            row[ys.index(1)] += c
        rows.append(row)
    return rows


def is_invertible(S: MonoidStructure, p: Sequence) -> bool:
    """p lies in the open orbit: every torus-block coordinate is nonzero."""
    torus = _torus(S)
    if S.family.tag == "rank0_nA":
        return True
    if torus is None:
        return linalg.det(left_multiplication_matrix(S, p)) != 0
    return all(Fraction(p[i]) != 0 for i in torus)


@dataclass(frozen=True)
class NilpotencyReport:
    nilpotent: bool
    k: int | None  # first k with p^(2^k) = 0
    bound: int  # 2^dim

    @property
    def index_bound(self) -> int | None:
        return None if self.k is None else 2 ** self.k

    def to_json(self) -> dict:
        return {"nilpotent": self.nilpotent, "squarings": self.k,
                "power": self.index_bound, "bound": self.bound}


def is_nilpotent(S: MonoidStructure, p: Sequence) -> NilpotencyReport:
    """Square up to dim times; nilpotent iff p^(2^dim) = 0."""
    if S.zero is None:
        raise ValueError("nilpotency needs a declared zero")
    q = _pt(p)
    for k in range(S.dim + 1):
        if q == S.zero:
            return NilpotencyReport(True, k, 2 ** S.dim)
        if k < S.dim:
            q = multiply(S, q, q)
    return NilpotencyReport(False, None, 2 ** S.dim)


@dataclass(frozen=True)
class DichotomyReport:
    total: int
    holds: int
    violations: tuple[tuple[Point, bool, bool], ...]
    max_index: int

    @property
    def ok(self) -> bool:
        return self.holds == self.total

    def summary(self) -> str:
        return f"holds at {self.holds}/{self.total} points"

    def to_json(self) -> dict:
        return {"summary": self.summary(), "total": self.total, "holds": self.holds,
                "max_nilpotency_index": self.max_index,
                "violations": [{"point": [str(v) for v in p], "invertible": inv, "nilpotent": nil}
                               for p, inv, nil in self.violations]}


def grid(n: int, radius: int) -> Iterable[Point]:
    return (_pt(p) for p in itertools.product(range(-radius, radius + 1), repeat=n))


def dichotomy_rank1(S: MonoidStructure, points: Iterable[Sequence]) -> DichotomyReport:
    """Each point of a rank-1 monoid with zero is invertible or nilpotent, never both."""
    if S.family is None or S.family.rank != 1 or S.zero is None:
        raise WrongFamily("wrong family: dichotomy needs a rank-1 catalog monoid with zero")
    total = holds = 0
    max_index = 0
    bad = []
    for p in points:
        p = _pt(p)
        total += 1
        inv = is_invertible(S, p)
        nil = is_nilpotent(S, p)
        if nil.nilpotent:
            max_index = max(max_index, nil.index_bound)
        if inv != nil.nilpotent:
            holds += 1
        else:
            bad.append((p, inv, nil.nilpotent))
    return DichotomyReport(total, holds, tuple(bad), max_index)


def orbit_pattern(S: MonoidStructure, p: Sequence) -> tuple[Point, tuple[int, ...]]:
    """Idempotent sharing p's torus support, and the coordinates vanishing on its orbit."""
    torus = _torus(S)
    if torus is None:
        raise MissingMetadata("group-like detection needs the torus block")
    p = _pt(p)
    e = tuple(Fraction(int(i in torus and p[i] != 0)) for i in range(S.dim))
    if S.family.tag == "rank0_nA":
        e = S.unit
    if not is_idempotent(S, e):
        raise ArithmeticError(f"torus pattern {e} is not idempotent")
    R = S.ring
    fixed = {f"x{i + 1}": R.const(v) for i, v in enumerate(e)}
    vanish = tuple(j for j, comp in enumerate(S.components) if comp.substitute(fixed, R).is_zero())
    return e, vanish


def is_group_like(S: MonoidStructure, p: Sequence) -> bool:
    """p lies in the orbit of an idempotent under the group of invertible elements."""
    p = _pt(p)
    _, vanish = orbit_pattern(S, p)
    return all(p[j] == 0 for j in vanish)


def group_like_power(S: MonoidStructure, p: Sequence) -> tuple[int, Point]:
    """Smallest m = 2^k (k <= dim) with p^m group-like, and p^m."""
    q = _pt(p)
    for k in range(S.dim + 1):
        if is_group_like(S, q):
            return 2 ** k, q
        q = multiply(S, q, q)
    raise ArithmeticError(f"no group-like power p^(2^k) with k <= {S.dim}")


__all__ = ["IdempotentSet", "BoundReport", "NilpotencyReport", "DichotomyReport",
           "MissingMetadata", "WrongFamily", "idempotents", "is_idempotent",
           "check_idempotent_bound", "is_invertible", "is_nilpotent", "dichotomy_rank1",
           "group_like_power", "is_group_like", "orbit_pattern", "grid",
           "left_multiplication_matrix"]
