"""Exact sparse multivariate polynomials over the rationals.

A polynomial lives in a :class:`Ring`, an ordered tuple of variable names.
Terms are stored as a dict mapping exponent tuples to ``Fraction``
coefficients; zero coefficients are never stored, so two polynomials are
equal exactly when their term dicts are.

Variables listed in ``Ring.laurent`` may carry negative exponents.  This is
how formal torus parameters (``t`` with ``t*t^-1 = 1``) and the intermediate
Laurent expressions ``y1^-b*y2`` are represented; every other variable is
kept polynomial and a negative exponent there raises ``ValueError``.

    >>> R = Ring.of("x1", "x2")
    >>> x1, x2 = R.gens()
    >>> str((x1 + x2) * (x1 - x2))
    'x1^2 - x2^2'
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


class AmbientMismatch(ValueError):
    """Raised when two polynomials from different rings are combined."""


class NonExactDivision(ArithmeticError):
    """Raised by :func:`divide_exact` when the divisor does not divide."""


class MissingImage(KeyError):
    """Raised by :meth:`Poly.substitute` when a variable has no image."""


@dataclass(frozen=True)
class Ring:
    """Ordered variable table.  ``laurent`` names may take negative powers."""

    names: tuple[str, ...]
    laurent: frozenset[str] = frozenset()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if not self.laurent <= set(self.names):
            raise ValueError("laurent variables must belong to the ring")

    @classmethod
    def of(cls, *names: str, laurent: Iterable[str] = ()) -> "Ring":
        return cls(tuple(names), frozenset(laurent))

    @classmethod
    def coords(cls, n: int, prefix: str = "x", extra: Sequence[str] = (),
               laurent: Iterable[str] = ()) -> "Ring":
        return cls(tuple(f"{prefix}{i}" for i in range(1, n + 1)) + tuple(extra),
                   frozenset(laurent))

    @classmethod
    def blocks(cls, n: int, prefixes: Sequence[str] = ("x", "y"),
               laurent: Iterable[str] = ()) -> "Ring":
        """Ring x1..xn, y1..yn (and further blocks) in that order."""
        names = tuple(f"{p}{i}" for p in prefixes for i in range(1, n + 1))
        return cls(names, frozenset(laurent))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"variable {name!r} not in ring {self.names}") from None

    def gen(self, name: str) -> "Poly":
        exps = [0] * self.nvars
        exps[self.index(name)] = 1
        return Poly(self, {tuple(exps): Fraction(1)})

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.gen(n) for n in self.names)

    def const(self, value: Scalar) -> "Poly":
        value = Fraction(value)
        if value == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: value})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def monomial(self, exps: Mapping[str, int], coeff: Scalar = 1) -> "Poly":
        vec = [0] * self.nvars
        for name, e in exps.items():
            vec[self.index(name)] += e
        return Poly(self, {tuple(vec): Fraction(coeff)} if coeff else {})

    def union(self, other: "Ring") -> "Ring":
        """Ring containing self's variables followed by other's new ones."""
        names = self.names + tuple(n for n in other.names if n not in self.names)
        return Ring(names, self.laurent | other.laurent)

    def with_laurent(self, names: Iterable[str]) -> "Ring":
        return Ring(self.names, self.laurent | frozenset(names))

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)


def _check_exps(ring: Ring, exps: Exponent) -> None:
    for name, e in zip(ring.names, exps):
        if e < 0 and name not in ring.laurent:
            raise ValueError(f"negative exponent on non-Laurent variable {name}")


class Poly:
    """Immutable polynomial in a fixed :class:`Ring`."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, Scalar] | None = None,
                 *, _trusted: bool = False):
        self.ring = ring
        self._hash = None
        if _trusted:
            self._terms = terms
            return
        clean: dict[Exponent, Fraction] = {}
        n = ring.nvars
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent {exps} has wrong length for {ring.names}")
            c = Fraction(c)
            if c:
                _check_exps(ring, exps)
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self._terms = {k: v for k, v in clean.items() if v}

    # -- inspection --------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.ring.nvars}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_polynomial(self) -> bool:
        """True when no exponent is negative (no Laurent denominators)."""
        return all(e >= 0 for exps in self._terms for e in exps)

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.ring.nvars)

    def variables(self) -> tuple[str, ...]:
        used = [False] * self.ring.nvars
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(n for n, u in zip(self.ring.names, used) if u)

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = self.ring.index(name)
        return max(e[i] for e in self._terms)

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lex order, highest first."""
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def leading(self) -> tuple[Exponent, Fraction]:
        return self.sorted_terms()[0]

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise AmbientMismatch(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s += v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Poly(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {k: -v for k, v in self._terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {k: v * c for k, v in self._terms.items()}, _trusted=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = out.get(e)
                out[e] = c1 * c2 if c is None else c + c1 * c2
        return Poly(self.ring, {k: v for k, v in out.items() if v}, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return divide_exact(self, other)

    def __pow__(self, m: int) -> "Poly":
        if m < 0:
            if not self.is_monomial():
                raise ValueError("only monomials can be inverted")
            (exps, c), = self._terms.items()
            inv = tuple(-e for e in exps)
            _check_exps(self.ring, inv)
            return Poly(self.ring, {inv: 1 / c}, _trusted=True) ** (-m)
        result = self.ring.one()
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and composition -----------------------------------------
    def diff(self, name: str) -> "Poly":
        i = self.ring.index(name)
        out = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e:
                new = list(exps)
                new[i] = e - 1
                out[tuple(new)] = c * e
        return Poly(self.ring, out, _trusted=True)

    def evaluate(self, point: Sequence[Scalar] | Mapping[str, Scalar]) -> Fraction:
        """Exact value at a point given positionally or by variable name."""
        if isinstance(point, Mapping):
            vals = [Fraction(point[n]) if n in point else None for n in self.ring.names]
        else:
            if len(point) != self.ring.nvars:
                raise ValueError(f"point has {len(point)} coordinates, ring has {self.ring.nvars}")
            vals = [Fraction(v) for v in point]
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    if v is None:
                        raise MissingImage("no value for a variable in use")
                    term *= v ** e
            total += term
        return total

    def substitute(self, assignment: Mapping[str, "Poly"], target: Ring | None = None) -> "Poly":
        """Compose: replace each variable by its image in ``target``.

        Variables without an entry in ``assignment`` map to the variable of the
        same name in ``target``; if ``target`` lacks it, :class:`MissingImage`
        is raised.
        """
        if target is None:
            rings = {p.ring for p in assignment.values()}
            target = rings.pop() if len(rings) == 1 else self.ring
        images: list[Poly | None] = []
        for name in self.ring.names:
            if name in assignment:
                img = assignment[name]
                if img.ring != target:
                    raise AmbientMismatch(f"image of {name} is not in the target ring")
                images.append(img)
            elif name in target.names:
                images.append(target.gen(name))
            else:
                images.append(None)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                img = images[i]
                if img is None:
                    raise MissingImage(self.ring.names[i])
                cache[key] = img ** e
            return cache[key]

        result: dict[Exponent, Fraction] = {}
        one = (0,) * target.nvars
        for exps, c in self._terms.items():
            term = Poly(target, {one: c}, _trusted=True)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            for k, v in term._terms.items():
                s = result.get(k, Fraction(0)) + v
                if s:
                    result[k] = s
                else:
                    result.pop(k, None)
        return Poly(target, result, _trusted=True)

    def to_ring(self, target: Ring) -> "Poly":
        """Re-express in ``target`` by variable name (an embedding)."""
        if target == self.ring:
            return self
        idx = []
        for i, name in enumerate(self.ring.names):
            idx.append(target.names.index(name) if name in target.names else None)
        out = {}
        for exps, c in self._terms.items():
            vec = [0] * target.nvars
            for i, e in enumerate(exps):
                if e:
                    if idx[i] is None:
                        raise MissingImage(self.ring.names[i])
                    vec[idx[i]] = e
            out[tuple(vec)] = c
        return Poly(target, out)

    def rename(self, mapping: Mapping[str, str], target: Ring) -> "Poly":
        return self.substitute({old: target.gen(new) for old, new in mapping.items()
                                if old in self.ring.names}, target)

    # -- presentation ------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"coeff": f"{c.numerator}/{c.denominator}", "exps": list(e)}
                for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, ring: Ring, data) -> "Poly":
        if isinstance(data, str):
            return parse_poly(data, ring)
        terms = {}
        for t in data:
            terms[tuple(t["exps"])] = terms.get(tuple(t["exps"]), 0) + Fraction(t["coeff"])
        return cls(ring, terms)


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def evaluate(p: Poly, point: Sequence[Scalar]) -> Fraction:
    return p.evaluate(point)


def substitute(p: Poly, assignment: Mapping[str, Poly], target: Ring | None = None) -> Poly:
    return p.substitute(assignment, target)


def divide_exact(p: Poly, q: Poly) -> Poly:
    """Return r with q*r == p, or raise :class:`NonExactDivision`.

    Monomial divisors are handled term by term; other divisors by repeated
    leading-term division, which succeeds exactly when q divides p.
    """
    if p.ring != q.ring:
        raise AmbientMismatch(f"{p.ring.names} vs {q.ring.names}")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if q.is_monomial():
        (qe, qc), = q.items()
        out = {}
        for exps, c in p.items():
            e = tuple(a - b for a, b in zip(exps, qe))
            for name, v in zip(p.ring.names, e):
                if v < 0 and name not in p.ring.laurent:
                    raise NonExactDivision(f"{q} does not divide {p}")
            out[e] = c / qc
        return Poly(p.ring, out, _trusted=True)
    lead_e, lead_c = q.leading()
    rem = p
    quot = p.ring.zero()
    key = lambda kv: (sum(kv[0]), kv[0])
    while rem:
        re_, rc = max(rem.items(), key=key)
        e = tuple(a - b for a, b in zip(re_, lead_e))
        if any(v < 0 for v in e):
            raise NonExactDivision(f"{q} does not divide {p}")
        t = Poly(p.ring, {e: rc / lead_c}, _trusted=True)
        quot = quot + t
        rem = rem - t * q
    return quot


# -- text form ---------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.sorted_terms():
        factors = []
        for name, e in zip(p.ring.names, exps):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<op>[-+*^()]))")


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``2*x1^3*y2 - 1/2*x2 + 5``; whitespace is ignored.

    Parenthesised sub-expressions and integer powers of them are accepted
    too, which makes hand-written inputs such as ``(x1+y1)^2`` convenient.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    if not tokens:
        raise ValueError("empty polynomial text")
    toks = tokens
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def take():
        nonlocal i
        if i >= len(toks):
            raise ValueError(f"unexpected end of {text!r}")
        t = toks[i]
        i += 1
        return t

    def expr() -> Poly:
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term() * sign
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term() -> Poly:
        acc = factor()
        while peek() == ("op", "*"):
            take()
            acc = acc * factor()
        return acc

    def exponent() -> int:
        neg = False
        if peek() == ("op", "-"):
            take()
            neg = True
        kind, val = take()
        if kind != "num" or "/" in val:
            raise ValueError(f"bad exponent {val!r}")
        return -int(val) if neg else int(val)

    def factor() -> Poly:
        kind, val = take()
        if kind == "num":
            base = ring.const(Fraction(val))
        elif kind == "var":
            if val not in ring.names:
                raise ValueError(f"unknown variable {val!r}; ring has {ring.names}")
            base = ring.gen(val)
        elif (kind, val) == ("op", "("):
            base = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
        else:
            raise ValueError(f"unexpected token {val!r}")
        if peek() == ("op", "^"):
            take()
            base = base ** exponent()
        return base

    result = expr()
    if i != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return result


# -- maps between affine spaces ---------------------------------------------

@dataclass(frozen=True)
class PolyMap:
    """A morphism A^n -> A^m given by m components in the source ring."""

    ring: Ring
    components: tuple[Poly, ...]

    def __post_init__(self):
        for p in self.components:
            if p.ring != self.ring:
                raise AmbientMismatch("every component must live in the source ring")

    @property
    def source_dim(self) -> int:
        return self.ring.nvars

    @property
    def target_dim(self) -> int:
        return len(self.components)

    def __call__(self, point: Sequence[Scalar]) -> tuple[Fraction, ...]:
        return tuple(p.evaluate(point) for p in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.ring == other.ring and self.components == other.components

    def __hash__(self):
        return hash((self.ring, self.components))

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.components) + ")"


# -- Schwartz-Zippel style random checks ------------------------------------

def random_rational(rng: random.Random, bound: int = 50) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound // 5 or 1)
    return Fraction(num, den)


def random_point(rng: random.Random, n: int, bound: int = 50,
                 nonzero: bool = False) -> tuple[Fraction, ...]:
    out = []
    while len(out) < n:
        v = random_rational(rng, bound)
        if nonzero and v == 0:
            continue
        out.append(v)
    return tuple(out)


def agree_at_random_points(f: Callable[[tuple], object], g: Callable[[tuple], object],
                           n: int, seed: int = 0, count: int = 5,
                           nonzero: bool = False) -> bool:
    """Evaluate two callables at ``count`` seeded random points and compare."""
    rng = random.Random(seed)
    for _ in range(count):
        pt = random_point(rng, n, nonzero=nonzero)
        if f(pt) != g(pt):
            return False
    return True
