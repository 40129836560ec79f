"""Gradings, derivations and their exponentials on K[x1..xn].

A :class:`Derivation` acts on the first ``n`` variables of its ring.  Any
further ring variables are formal scalars (the parameters alpha, beta of a
family of derivations) and are killed by the derivation, so
``alpha1*d1 + alpha2*d2`` is itself a derivation over the parameter ring.

Local nilpotency is only decided where it is decidable by linear algebra:
homogeneous derivations of degree zero for a positive grading (every graded
component is finite dimensional and invariant) and of negative degree
(degrees strictly descend).  Everything else raises :class:`UndecidedRegime`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .polycore import AmbientMismatch, Exponent, Poly, Ring


class UndecidedRegime(ValueError):
    """Local nilpotency requested outside the decidable regime."""


class NotLocallyNilpotent(ValueError):
    pass


# -- gradings ----------------------------------------------------------------

@dataclass(frozen=True)
class Grading:
    """Integer weight vector (one per coordinate variable) of fixed rank."""

    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ranks = {len(w) for w in self.weights}
        if len(ranks) != 1:
            raise ValueError("all weights must have the same rank")

    @classmethod
    def of(cls, weights: Iterable) -> "Grading":
        """Accept ``[1, 2, 3]`` (Z-grading) or ``[[1, 0], [0, 1]]``."""
        ws = []
        for w in weights:
            ws.append(tuple(w) if isinstance(w, (list, tuple)) else (int(w),))
        return cls(tuple(ws))

    @property
    def rank(self) -> int:
        return len(self.weights[0])

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def is_positive(self) -> bool:
        """Nonnegative nonzero weights, so every component is finite dimensional."""
        return all(all(v >= 0 for v in w) and any(w) for w in self.weights)

    def monomial_degree(self, exps: Sequence[int]) -> tuple[int, ...]:
        deg = [0] * self.rank
        for w, e in zip(self.weights, exps[: self.nvars]):
            if e:
                for k in range(self.rank):
                    deg[k] += w[k] * e
        return tuple(deg)

    def degree(self, p: Poly) -> tuple[int, ...] | None:
        """Degree of a nonzero homogeneous polynomial, else None."""
        degs = {self.monomial_degree(e) for e, _ in p.items()}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self, p: Poly) -> bool:
        return p.is_zero() or self.degree(p) is not None

    def component_basis(self, degree: Sequence[int]) -> tuple[Exponent, ...]:
        """All exponent vectors (coordinate part) of the given degree."""
        if not self.is_positive():
            raise UndecidedRegime("components of a non-positive grading may be infinite")
        return _component_basis(self.weights, tuple(degree))

    def to_json(self) -> dict:
        return {"weights": [list(w) for w in self.weights]}

    @classmethod
    def from_json(cls, data: dict) -> "Grading":
        return cls.of(data["weights"])


@lru_cache(maxsize=None)
def _component_basis(weights, degree) -> tuple[Exponent, ...]:
    n = len(weights)
    total = sum(degree)
    out: list[Exponent] = []

    def rec(i: int, acc: list[int], partial: list[int]):
        if i == n:
            if tuple(partial) == degree:
                out.append(tuple(acc))
            return
        w = weights[i]
        step = sum(w)
        e = 0
        while sum(partial) + e * step <= total:
            rec(i + 1, acc + [e], [p + e * v for p, v in zip(partial, w)])
            e += 1

    rec(0, [], [0] * len(degree))
    return tuple(sorted(out, key=lambda e: (sum(e), e), reverse=True))


# -- derivations ----------------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    """delta given by the images of the first ``n`` ring variables."""

    ring: Ring
    images: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.images) > self.ring.nvars:
            raise ValueError("more images than ring variables")
        for p in self.images:
            if p.ring != self.ring:
                raise AmbientMismatch("derivation images must live in its ring")

    @classmethod
    def from_map(cls, ring: Ring, images: Mapping[str, Poly | str], n: int | None = None) -> "Derivation":
        n = ring.nvars if n is None else n
        imgs = []
        for name in ring.names[:n]:
            img = images.get(name, ring.zero())
            imgs.append(ring.parse(img) if isinstance(img, str) else img)
        unknown = set(images) - set(ring.names[:n])
        if unknown:
            raise KeyError(f"images given for non-coordinate variables {sorted(unknown)}")
        return cls(ring, tuple(imgs))

    @classmethod
    def zero(cls, ring: Ring, n: int | None = None) -> "Derivation":
        n = ring.nvars if n is None else n
        return cls(ring, tuple(ring.zero() for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def coord_names(self) -> tuple[str, ...]:
        return self.ring.names[: self.n]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.images)

    def __call__(self, f: Poly) -> Poly:
        return apply(self, f)

    def __add__(self, other: "Derivation") -> "Derivation":
        _same(self, other)
        return Derivation(self.ring, tuple(a + b for a, b in zip(self.images, other.images)))

    def __sub__(self, other: "Derivation") -> "Derivation":
        _same(self, other)
        return Derivation(self.ring, tuple(a - b for a, b in zip(self.images, other.images)))

    def scale(self, c) -> "Derivation":
        """Multiply by a scalar or by a polynomial in the parameter variables."""
        if isinstance(c, Poly) and set(c.variables()) & set(self.coord_names):
            raise ValueError("scaling by a coordinate-dependent polynomial")
        return Derivation(self.ring, tuple(p * c for p in self.images))

    def extend(self, ring: Ring) -> "Derivation":
        """Same derivation viewed over a larger ring (new names are scalars)."""
        if ring.names[: self.n] != self.coord_names:
            raise AmbientMismatch("coordinates must lead the extended ring")
        return Derivation(ring, tuple(p.to_ring(ring) for p in self.images))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash((self.ring, self.images))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{x} -> {p}" for x, p in zip(self.coord_names, self.images)) + "}"

    def to_json(self) -> dict:
        return {"vars": self.n, "names": list(self.ring.names),
                "images": [p.to_json() for p in self.images]}

    @classmethod
    def from_json(cls, data: dict, ring: Ring | None = None) -> "Derivation":
        n = int(data["vars"])
        if ring is None:
            ring = Ring(tuple(data["names"])) if "names" in data else Ring.coords(n)
        imgs = tuple(Poly.from_json(ring, p) for p in data["images"])
        if len(imgs) != n:
            raise ValueError(f"expected {n} images, got {len(imgs)}")
        return cls(ring, imgs)


def _same(d1: Derivation, d2: Derivation) -> None:
    if d1.ring != d2.ring or d1.n != d2.n:
        raise AmbientMismatch("derivations live on different rings")


def apply(delta: Derivation, f: Poly) -> Poly:
    """Leibniz extension: sum_i delta(x_i) * df/dx_i."""
    if f.ring != delta.ring:
        raise AmbientMismatch(f"{f.ring.names} vs {delta.ring.names}")
    out = f.ring.zero()
    for name, img in zip(delta.coord_names, delta.images):
        if img:
            d = f.diff(name)
            if d:
                out = out + img * d
    return out


def iterate(delta: Derivation, f: Poly, k: int) -> Poly:
    for _ in range(k):
        if f.is_zero():
            break
        f = apply(delta, f)
    return f


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """[d1, d2] = d1 d2 - d2 d1, evaluated on the generators."""
    _same(d1, d2)
    return Derivation(d1.ring, tuple(apply(d1, d2.images[i]) - apply(d2, d1.images[i])
                                     for i in range(d1.n)))


def _check_grading(delta: Derivation, g: Grading) -> None:
    if g.nvars != delta.n:
        raise ValueError(f"grading has {g.nvars} weights for {delta.n} coordinates")


def degree_of_derivation(delta: Derivation, g: Grading):
    """Degree of a homogeneous derivation, or None if it is not homogeneous.

    Returns an int for Z-gradings and a tuple for higher rank.  The zero
    derivation is reported as degree zero.
    """
    _check_grading(delta, g)
    degs = set()
    for w, img in zip(g.weights, delta.images):
        if img.is_zero():
            continue
        d = g.degree(img)
        if d is None:
            return None
        degs.add(tuple(a - b for a, b in zip(d, w)))
    if len(degs) > 1:
        return None
    deg = degs.pop() if degs else (0,) * g.rank
    return deg[0] if g.rank == 1 else deg


def _as_tuple(deg) -> tuple[int, ...]:
    return (deg,) if isinstance(deg, int) else tuple(deg)


def _split(delta: Derivation, exps: Exponent) -> tuple[Exponent, Exponent]:
    return exps[: delta.n], exps[delta.n:]


def component_matrix(delta: Derivation, g: Grading, degree: Sequence[int]):
    """Matrix (rows = basis monomials) of a degree-0 delta on one component.

    Entries are polynomials in the scalar variables of the ring, so
    parametrised derivations are handled without specialising.
    """
    basis = g.component_basis(degree)
    index = {e: i for i, e in enumerate(basis)}
    ring = delta.ring
    tail = ring.nvars - delta.n
    rows = []
    for e in basis:
        mono = Poly(ring, {e + (0,) * tail: 1})
        image = apply(delta, mono)
        row = [ring.zero() for _ in basis]
        for exps, c in image.items():
            head, rest = _split(delta, exps)
            j = index.get(head)
            if j is None:
                raise ValueError("derivation does not preserve the component")
            row[j] = row[j] + Poly(ring, {(0,) * delta.n + rest: c})
        rows.append(row)
    return basis, rows


def _matmul_poly(a, b, ring: Ring):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = ring.zero()
            for k in range(n):
                if a[i][k] and b[k][j]:
                    s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(row)
    return out


def _is_nilpotent(rows, ring: Ring) -> bool:
    n = len(rows)
    if n == 0:
        return True
    power = rows
    for _ in range(n - 1):
        power = _matmul_poly(power, rows, ring)
    return all(p.is_zero() for row in power for p in row)


def is_locally_nilpotent(delta: Derivation, g: Grading) -> bool:
    """Decide local nilpotency for homogeneous delta of degree <= 0.

    Degree 0: delta is nilpotent on each generator's graded component
    (checked as M^dim = 0).  Negative degree: always locally nilpotent.
    """
    _check_grading(delta, g)
    if not g.is_positive():
        raise UndecidedRegime("grading is not positive")
    deg = degree_of_derivation(delta, g)
    if deg is None:
        raise UndecidedRegime("derivation is not homogeneous")
    deg = _as_tuple(deg)
    if sum(deg) < 0:
        return True
    if any(deg):
        raise UndecidedRegime(f"derivation has degree {deg}; only degree <= 0 is decided")
    seen = set()
    for w, img in zip(g.weights, delta.images):
        if img.is_zero() or w in seen:
            continue
        seen.add(w)
        _, rows = component_matrix(delta, g, w)
        if not _is_nilpotent(rows, delta.ring):
            return False
    return True


def _step_budget(delta: Derivation, g: Grading) -> int:
    deg = _as_tuple(degree_of_derivation(delta, g))
    if sum(deg) < 0:
        return max(sum(w) for w in g.weights) // -sum(deg) + 2
    return 1 + max((len(g.component_basis(w)) for w in g.weights), default=0)


# -- automorphisms ------------------------------------------------------------

@dataclass(frozen=True)
class PolyAutomorphism:
    """x_i -> components[i] on the first n ring variables.

    The remaining ring variables are formal parameters.  Composition is as
    point maps: ``compose(phi, psi)(x) = phi(psi(x))``.  ``inverse`` is
    optional and, when present, satisfies ``compose(phi, inverse) == id``.
    """

    ring: Ring
    components: tuple[Poly, ...]
    inverse: tuple[Poly, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        for p in self.components + (self.inverse or ()):
            if p.ring != self.ring:
                raise AmbientMismatch("components must live in the automorphism ring")

    @classmethod
    def identity(cls, ring: Ring, n: int | None = None) -> "PolyAutomorphism":
        n = ring.nvars if n is None else n
        gens = ring.gens()[:n]
        return cls(ring, gens, gens)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def coord_names(self) -> tuple[str, ...]:
        return self.ring.names[: self.n]

    @property
    def params(self) -> tuple[str, ...]:
        return self.ring.names[self.n:]

    def is_identity(self) -> bool:
        return self.components == self.ring.gens()[: self.n]

    def extend(self, ring: Ring) -> "PolyAutomorphism":
        if ring.names[: self.n] != self.coord_names:
            raise AmbientMismatch("coordinates must lead the extended ring")
        inv = None if self.inverse is None else tuple(p.to_ring(ring) for p in self.inverse)
        return PolyAutomorphism(ring, tuple(p.to_ring(ring) for p in self.components), inv)

    def specialize(self, values: Mapping[str, Poly | int | Fraction],
                   target: Ring | None = None) -> "PolyAutomorphism":
        """Substitute parameters; ``target`` defaults to the surviving variables."""
        if target is None:
            keep = [n for n in self.ring.names if n not in values]
            extra: list[str] = []
            for v in values.values():
                if isinstance(v, Poly):
                    extra += [n for n in v.ring.names if n not in keep and n not in extra]
            target = Ring(tuple(keep + extra),
                          frozenset(n for n in self.ring.laurent if n in keep)
                          | frozenset().union(*(v.ring.laurent for v in values.values()
                                                if isinstance(v, Poly))))
        assign = {}
        for name, v in values.items():
            assign[name] = v.to_ring(target) if isinstance(v, Poly) else target.const(v)
        comps = tuple(p.substitute(assign, target) for p in self.components)
        inv = None
        if self.inverse is not None:
            inv = tuple(p.substitute(assign, target) for p in self.inverse)
        return PolyAutomorphism(target, comps, inv)

    def rename_params(self, mapping: Mapping[str, str]) -> "PolyAutomorphism":
        names = tuple(mapping.get(n, n) for n in self.ring.names)
        lau = frozenset(mapping.get(n, n) for n in self.ring.laurent)
        target = Ring(names, lau)
        assign = {old: target.gen(new) for old, new in mapping.items() if old in self.ring.names}
        comps = tuple(p.substitute(assign, target) for p in self.components)
        inv = None if self.inverse is None else tuple(p.substitute(assign, target) for p in self.inverse)
        return PolyAutomorphism(target, comps, inv)

    def __call__(self, point: Sequence, params: Sequence | Mapping = ()) -> tuple[Fraction, ...]:
        if isinstance(params, Mapping):
            params = [params[n] for n in self.params]
        full = list(point) + list(params)
        return tuple(p.evaluate(full) for p in self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.components) + ")"

    def to_json(self) -> dict:
        return {"vars": self.n, "names": list(self.ring.names),
                "laurent": sorted(self.ring.laurent),
                "components": [p.to_json() for p in self.components]}


def compose(phi: PolyAutomorphism, psi: PolyAutomorphism) -> PolyAutomorphism:
    """Point-map composition x -> phi(psi(x)); shared parameter names coincide."""
    if phi.coord_names != psi.coord_names:
        raise AmbientMismatch("automorphisms act on different coordinates")
    ring = phi.ring.union(psi.ring)
    a, b = phi.extend(ring), psi.extend(ring)
    assign = dict(zip(a.coord_names, b.components))
    comps = tuple(p.substitute(assign, ring) for p in a.components)
    inv = None
    if a.inverse is not None and b.inverse is not None:
        back = dict(zip(b.coord_names, a.inverse))
        inv = tuple(p.substitute(back, ring) for p in b.inverse)
    return PolyAutomorphism(ring, comps, inv)


def exp_action(delta: Derivation, param: str | None = None, grading: Grading | None = None,
               max_steps: int = 64) -> PolyAutomorphism:
    """exp(param * delta): x_i -> sum_k param^k / k! * delta^k(x_i).

    With ``param=None`` the exponential exp(delta) itself is returned, which
    is how a derivation with formal coefficients (alpha1*d1 + alpha2*d2)
    produces its group action.  When a grading is given, local nilpotency is
    checked first and the step budget comes from the component dimensions.
    """
    if grading is not None:
        if not is_locally_nilpotent(delta, grading):
            raise NotLocallyNilpotent(f"{delta} is not locally nilpotent")
        max_steps = _step_budget(delta, grading)
    if param is not None:
        if param in delta.ring.names:
            raise ValueError(f"parameter {param!r} already names a ring variable")
        ring = delta.ring.union(Ring.of(param))
        delta = delta.extend(ring)
        t = ring.gen(param)
    else:
        ring = delta.ring
        t = ring.one()
    comps = []
    inv = []
    for x in ring.gens()[: delta.n]:
        fwd, back = ring.zero(), ring.zero()
        term = x
        k = 0
        while term:
            if k > max_steps:
                raise NotLocallyNilpotent(f"delta^k(x) nonzero after {max_steps} steps")
            c = Fraction(1, math.factorial(k))
            tk = t ** k
            fwd = fwd + term * tk * c
            back = back + term * tk * (c if k % 2 == 0 else -c)
            term = apply(delta, term)
            k += 1
        comps.append(fwd)
        inv.append(back)
    return PolyAutomorphism(ring, tuple(comps), tuple(inv))


def conjugate(delta: Derivation, phi: PolyAutomorphism) -> Derivation:
    """Express delta in the new coordinates x~ = phi(x).

    new(x~_j) = delta(phi_j) rewritten through x = phi^{-1}(x~).  Requires
    ``phi.inverse`` and no parameters.
    """
    if phi.inverse is None:
        raise ValueError("conjugation needs the inverse change of variables")
    if phi.ring != delta.ring or phi.n != delta.n:
        raise AmbientMismatch("change of variables and derivation differ in ring")
    back = dict(zip(phi.coord_names, phi.inverse))
    return Derivation(delta.ring, tuple(apply(delta, c).substitute(back, delta.ring)
                                        for c in phi.components))


def partial(ring: Ring, name: str, coeff: Poly | None = None, n: int | None = None) -> Derivation:
    """coeff * d/d(name)."""
    coeff = ring.one() if coeff is None else coeff
    return Derivation.from_map(ring, {name: coeff}, n)
