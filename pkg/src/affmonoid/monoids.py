"""Polynomial multiplications on A^n and symbolic checks of the monoid axioms.

The multiplication ``mu`` lives in the ring x1..xn, y1..yn; associativity
adjoins z1..zn.  All checks are exact polynomial identities.  A failing check
comes back with a witness: the first failing component, the smallest
offending monomial, and a rational point where the two sides differ.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping, Sequence

from .derivations import PolyAutomorphism
from .polycore import Exponent, Poly, PolyMap, Ring, random_point

if TYPE_CHECKING:
    from .catalog import FamilyDescriptor

Point = tuple[Fraction, ...]


class EmbeddingNotPolynomial(ValueError):
    """The product obtained from a group action still has denominators."""


@dataclass(frozen=True)
class MonoidStructure:
    dim: int
    mu: PolyMap
    unit: Point | None = None
    zero: Point | None = None
    family: "FamilyDescriptor | None" = None

    def __post_init__(self):
        if self.mu.ring != Ring.blocks(self.dim):
            raise ValueError(f"mu must live in x1..x{self.dim}, y1..y{self.dim}")
        if self.mu.target_dim != self.dim:
            raise ValueError("mu must have one component per coordinate")
        for pt in (self.unit, self.zero):
            if pt is not None and len(pt) != self.dim:
                raise ValueError("unit/zero must have length dim")

    @classmethod
    def from_components(cls, comps: Sequence[Poly | str], unit=None, zero=None,
                        family=None) -> "MonoidStructure":
        n = len(comps)
        ring = Ring.blocks(n)
        polys = tuple(ring.parse(c) if isinstance(c, str) else c.to_ring(ring) for c in comps)
        return cls(n, PolyMap(ring, polys), _point(unit), _point(zero), family)

    @property
    def ring(self) -> Ring:
        return self.mu.ring

    @property
    def components(self) -> tuple[Poly, ...]:
        return self.mu.components

    def __call__(self, p, q) -> Point:
        return multiply(self, p, q)

    def __str__(self) -> str:
        return "x*y = " + str(self.mu)

    def with_component(self, i: int, poly: Poly | str) -> "MonoidStructure":
        comps = list(self.components)
        comps[i] = self.ring.parse(poly) if isinstance(poly, str) else poly
        return replace(self, mu=PolyMap(self.ring, tuple(comps)))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "mu": [str(p) for p in self.components],
            "unit": None if self.unit is None else [str(v) for v in self.unit],
            "zero": None if self.zero is None else [str(v) for v in self.zero],
            "family": None if self.family is None else self.family.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MonoidStructure":
        from .catalog import FamilyDescriptor

        n = int(data["dim"])
        ring = Ring.blocks(n)
        mu = tuple(ring.parse(p) if isinstance(p, str) else Poly.from_json(ring, p)
                   for p in data["mu"])
        if len(mu) != n:
            raise ValueError(f"mu has {len(mu)} components for dim {n}")
        fam = data.get("family")
        return cls(n, PolyMap(ring, mu), _point(data.get("unit")), _point(data.get("zero")),
                   FamilyDescriptor.from_json(fam) if fam else None)


def _point(p) -> Point | None:
    if p is None:
        return None
    return tuple(Fraction(v) for v in p)


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom check; the witness fields are set on failure."""

    axiom: str
    ok: bool
    component: int | None = None
    monomial: Exponent | None = None
    point: Point | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "ok": self.ok}
        if not self.ok:
            out.update(component=self.component + 1 if self.component is not None else None,
                       monomial=list(self.monomial) if self.monomial else None,
                       point=[str(v) for v in self.point] if self.point else None,
                       lhs=str(self.lhs), rhs=str(self.rhs))
        return out


def _find_point(diff: Poly, rng: random.Random, tries: int = 200) -> Point:
    for _ in range(tries):
        pt = random_point(rng, diff.ring.nvars)
        if diff.evaluate(pt) != 0:
            return pt
    raise RuntimeError("no witness point found for a nonzero polynomial")


def _compare(axiom: str, lhs: Sequence[Poly], rhs: Sequence[Poly], seed: int) -> AxiomCheck:
    rng = random.Random(seed)
    for i, (a, b) in enumerate(zip(lhs, rhs)):
        diff = a - b
        if diff:
            pt = _find_point(diff, rng)
            return AxiomCheck(axiom, False, i, min(e for e, _ in diff.items()), pt,
                              a.evaluate(pt), b.evaluate(pt))
    return AxiomCheck(axiom, True)


def _swap(S: MonoidStructure) -> dict[str, Poly]:
    R = S.ring
    n = S.dim
    out = {}
    for i in range(1, n + 1):
        out[f"x{i}"] = R.gen(f"y{i}")
        out[f"y{i}"] = R.gen(f"x{i}")
    return out


def verify_commutative(S: MonoidStructure, seed: int = 0) -> AxiomCheck:
    """mu(x, y) == mu(y, x) componentwise."""
    swap = _swap(S)
    swapped = [p.substitute(swap, S.ring) for p in S.components]
    return _compare("commutative", S.components, swapped, seed)


def _triple_ring(n: int) -> Ring:
    return Ring.blocks(n, ("x", "y", "z"))


def associativity_sides(S: MonoidStructure) -> tuple[list[Poly], list[Poly]]:
    """(mu(mu(x,y),z), mu(x,mu(y,z))) in the ring x, y, z."""
    n = S.dim
    T = _triple_ring(n)
    mu_xy = [p.to_ring(T) for p in S.components]
    shift = {**{f"x{i}": T.gen(f"y{i}") for i in range(1, n + 1)},
             **{f"y{i}": T.gen(f"z{i}") for i in range(1, n + 1)}}
    mu_yz = [p.substitute(shift, T) for p in mu_xy]
    left_assign = {**{f"x{i}": mu_xy[i - 1] for i in range(1, n + 1)},
                   **{f"y{i}": T.gen(f"z{i}") for i in range(1, n + 1)}}
    right_assign = {f"y{i}": mu_yz[i - 1] for i in range(1, n + 1)}
    lhs = [p.substitute(left_assign, T) for p in mu_xy]
    rhs = [p.substitute(right_assign, T) for p in mu_xy]
    return lhs, rhs


def verify_associative(S: MonoidStructure, seed: int = 0, precheck: int = 5) -> AxiomCheck:
    """mu(mu(x,y),z) == mu(x,mu(y,z)) as an identity in 3n variables.

    A seeded numeric pre-check runs first; a mismatch there avoids the full
    expansion except for the one failing component.
    """
    n = S.dim
    rng = random.Random(seed)
    for _ in range(precheck):
        p, q, r = (random_point(rng, n) for _ in range(3))
        left = multiply(S, multiply(S, p, q), r)
        right = multiply(S, p, multiply(S, q, r))
        if left != right:
            i = next(k for k in range(n) if left[k] != right[k])
            lhs, rhs = associativity_sides(S)
            diff = lhs[i] - rhs[i]
            return AxiomCheck("associative", False, i, min(e for e, _ in diff.items()),
                              p + q + r, left[i], right[i])
    lhs, rhs = associativity_sides(S)
    return _compare("associative", lhs, rhs, seed)


def _fix_x(S: MonoidStructure, point: Sequence, first: bool = True) -> list[Poly]:
    n = S.dim
    R = S.ring
    block = "x" if first else "y"
    assign = {f"{block}{i}": R.const(Fraction(point[i - 1])) for i in range(1, n + 1)}
    return [p.substitute(assign, R) for p in S.components]


def verify_unit(S: MonoidStructure, e: Sequence | None = None, seed: int = 0) -> AxiomCheck:
    """mu(e, y) == y and mu(y, e) == y identically."""
    e = S.unit if e is None else e
    if e is None or len(e) != S.dim:
        return AxiomCheck("unit", False)
    R = S.ring
    n = S.dim
    left = _fix_x(S, e, first=True)
    check = _compare("unit", left, [R.gen(f"y{i}") for i in range(1, n + 1)], seed)
    if not check:
        return check
    right = _fix_x(S, e, first=False)
    return _compare("unit", right, [R.gen(f"x{i}") for i in range(1, n + 1)], seed)


def verify_zero(S: MonoidStructure, z: Sequence | None = None, seed: int = 0) -> AxiomCheck:
    """mu(z, y) == z and mu(y, z) == z identically."""
    z = S.zero if z is None else z
    if z is None or len(z) != S.dim:
        return AxiomCheck("zero", False)
    R = S.ring
    consts = [R.const(Fraction(v)) for v in z]
    check = _compare("zero", _fix_x(S, z, True), consts, seed)
    if not check:
        return check
    return _compare("zero", _fix_x(S, z, False), consts, seed)


def verify_all(S: MonoidStructure, seed: int = 0) -> list[AxiomCheck]:
    """Commutativity, associativity, and the declared unit/zero."""
    checks = [verify_commutative(S, seed), verify_associative(S, seed)]
    if S.unit is not None:
        checks.append(verify_unit(S, seed=seed))
    if S.zero is not None:
        checks.append(verify_zero(S, seed=seed))
    return checks


def multiply(S: MonoidStructure, p: Sequence, q: Sequence) -> Point:
    if len(p) != S.dim or len(q) != S.dim:
        raise ValueError(f"points must have {S.dim} coordinates")
    pt = [Fraction(v) for v in p] + [Fraction(v) for v in q]
    return tuple(c.evaluate(pt) for c in S.components)


def power(S: MonoidStructure, p: Sequence, m: int) -> Point:
    """p^m by repeated squaring; p^0 is the unit."""
    if m < 0:
        raise ValueError("negative powers are not defined in a monoid")
    p = tuple(Fraction(v) for v in p)
    if m == 0:
        if S.unit is None:
            raise ValueError("p^0 needs a declared unit")
        return S.unit
    result = None
    base = p
    while m:
        if m & 1:
            result = base if result is None else multiply(S, result, base)
        m >>= 1
        if m:
            base = multiply(S, base, base)
    return result


def monoid_from_action(action: PolyAutomorphism, base: Sequence,
                       inversion: Mapping[str, Poly], zero: Sequence | None = None,
                       family: "FamilyDescriptor | None" = None) -> MonoidStructure:
    """Multiplication x*y from a group action with an open orbit through ``base``.

    ``inversion`` expresses each action parameter as a Laurent expression in
    y1..yn such that acting on ``base`` gives back y.  Substituting it into
    the action applied to x yields x*y, which must come out polynomial.
    """
    n = action.n
    if len(base) != n:
        raise ValueError("base point has the wrong length")
    missing = set(action.params) - set(inversion)
    if missing:
        raise KeyError(f"no inversion for parameters {sorted(missing)}")
    ys = [f"y{i}" for i in range(1, n + 1)]
    W = Ring(tuple(action.coord_names) + tuple(ys), frozenset(ys))
    Y = Ring(tuple(ys), frozenset(ys))
    inv_W = {k: v.to_ring(W) for k, v in inversion.items() if k in action.params}
    inv_Y = {k: v.to_ring(Y) for k, v in inversion.items() if k in action.params}

    at_base = {x: Y.const(Fraction(v)) for x, v in zip(action.coord_names, base)}
    for i, comp in enumerate(action.components):
        orbit = comp.substitute({**at_base, **inv_Y}, Y)
        if orbit != Y.gen(ys[i]):
            raise ValueError(f"inversion does not parametrise the orbit: coordinate {i + 1} "
                             f"gives {orbit}")

    target = Ring.blocks(n)
    comps = []
    for comp in action.components:
        prod = comp.substitute(inv_W, W)
        if not prod.is_polynomial():
            raise EmbeddingNotPolynomial(f"denominators remain in {prod}")
        comps.append(prod.to_ring(target))
    return MonoidStructure(n, PolyMap(target, tuple(comps)), _point(base), _point(zero), family)
