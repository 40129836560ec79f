"""Named commutative monoids on A^n and the group actions they come from.

Every constructor returns a :class:`MonoidStructure` carrying its unit, its
zero when it has one, and a :class:`FamilyDescriptor` with rank, corank and
the coordinates of the torus block (the coordinates whose nonvanishing cuts
out the group of invertible elements).  Parameters must already be sorted;
nothing is normalised silently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .derivations import Derivation, PolyAutomorphism, compose, exp_action
from .monoids import MonoidStructure, verify_all
from .polycore import Poly, PolyMap, Ring

TAGS = ("rank0_nA", "toric_nM", "corank1", "A2_MbA", "A3_MbAcA", "A3_MbAbcA",
        "A3_MMbcA", "bilinear_algebra", "hirzebruch", "local_truncated")


class ConstraintError(ValueError):
    """Family parameters outside the allowed range."""


@dataclass(frozen=True)
class FamilyDescriptor:
    tag: str
    params: tuple[int, ...]
    rank: int | None = None
    corank: int | None = None
    torus: tuple[int, ...] | None = None
    name: str | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")

    def to_json(self) -> dict:
        return {"tag": self.tag, "params": list(self.params), "rank": self.rank,
                "corank": self.corank,
                "torus": None if self.torus is None else list(self.torus),
                "name": self.name}

    @classmethod
    def from_json(cls, data: dict) -> "FamilyDescriptor":
        torus = data.get("torus")
        return cls(data["tag"], tuple(int(p) for p in data.get("params", ())),
                   data.get("rank"), data.get("corank"),
                   None if torus is None else tuple(int(i) for i in torus), data.get("name"))

    def label(self) -> str:
        extra = f" {self.name}" if self.name else ""
        return f"{self.tag}{list(self.params)}{extra}"


def divmod_bc(b: int, c: int) -> tuple[int, int]:
    """(d, e) with c = b*d + e and 0 <= e < b."""
    return divmod(c, b)


# -- Q_{b,c} -----------------------------------------------------------------

Q_RING = Ring.of("x1", "y1", "x2", "y2")


def q_poly(b: int, c: int) -> Poly:
    """Q_{b,c}(x1, y1, x2, y2) = sum_{k=1}^{d} C(d+1,k) x1^(e+b(k-1)) y1^(e+b(d-k)) x2^(d-k+1) y2^k."""
    if b < 1 or c < b:
        raise ConstraintError(f"Q_(b,c) needs 1 <= b <= c, got b={b}, c={c}")
    d, e = divmod_bc(b, c)
    terms = {}
    for k in range(1, d + 1):
        terms[(e + b * (k - 1), e + b * (d - k), d - k + 1, k)] = math.comb(d + 1, k)
    return Poly(Q_RING, terms)


def q_closed_form_sides(b: int, c: int) -> tuple[Poly, Poly]:
    """Both sides of x1^(b-e) y1^(b-e) Q = (x1^b y2 + y1^b x2)^(d+1) - (x1^b y2)^(d+1) - (y1^b x2)^(d+1)."""
    d, e = divmod_bc(b, c)
    x1, y1, x2, y2 = Q_RING.gens()
    u, v = x1 ** b * y2, y1 ** b * x2
    rhs = (u + v) ** (d + 1) - u ** (d + 1) - v ** (d + 1)
    lhs = (x1 * y1) ** (b - e) * q_poly(b, c)
    return lhs, rhs


# -- basic families ------------------------------------------------------------

def _monoid(comps, unit, zero, family) -> MonoidStructure:
    n = len(comps)
    ring = Ring.blocks(n)
    return MonoidStructure(n, PolyMap(ring, tuple(comps)),
                           tuple(Fraction(v) for v in unit),
                           None if zero is None else tuple(Fraction(v) for v in zero),
                           family)


def _xy(n: int):
    R = Ring.blocks(n)
    g = R.gens()
    return R, g[:n], g[n:]


def make_rank0(n: int) -> MonoidStructure:
    """(x1 + y1, ..., xn + yn): the vector group G_a^n, no zero."""
    if n < 1:
        raise ConstraintError("n must be >= 1")
    R, x, y = _xy(n)
    fam = FamilyDescriptor("rank0_nA", (n,), 0, n, ())
    return _monoid([a + b for a, b in zip(x, y)], [0] * n, None, fam)


def make_toric(n: int) -> MonoidStructure:
    """(x1 y1, ..., xn yn)."""
    if n < 1:
        raise ConstraintError("n must be >= 1")
    R, x, y = _xy(n)
    fam = FamilyDescriptor("toric_nM", (n,), n, 0, tuple(range(n)))
    return _monoid([a * b for a, b in zip(x, y)], [1] * n, [0] * n, fam)


def make_corank1(n: int, b: Sequence[int]) -> MonoidStructure:
    """(x1y1, ..., x_{n-1}y_{n-1}, x^b y_n + y^b x_n) for sorted b >= 0."""
    b = tuple(int(v) for v in b)
    if n < 2:
        raise ConstraintError("corank-1 monoids need n >= 2")
    if len(b) != n - 1:
        raise ConstraintError(f"b must have n-1 = {n - 1} entries")
    if any(v < 0 for v in b):
        raise ConstraintError("b must be non-negative")
    if list(b) != sorted(b):
        raise ConstraintError("b must be sorted")
    R, x, y = _xy(n)
    xb, yb = R.one(), R.one()
    for i, e in enumerate(b):
        xb = xb * x[i] ** e
        yb = yb * y[i] ** e
    comps = [x[i] * y[i] for i in range(n - 1)] + [xb * y[-1] + yb * x[-1]]
    tag = {2: "A2_MbA", 3: "A3_MMbcA"}.get(n, "corank1")
    fam = FamilyDescriptor(tag, b, n - 1, 1, tuple(range(n - 1)))
    zero = [0] * n if any(b) else None
    return _monoid(comps, [1] * (n - 1) + [0], zero, fam)


def make_A3(tag: str, b: int, c: int) -> MonoidStructure:
    """Rank-1 monoids on A^3: M +_b A +_c A (``MbAcA``) and M +_b A +_{b,c} A (``MbAbcA``)."""
    tag = tag.removeprefix("A3_")
    if tag == "MbAcA":
        if not 0 <= b <= c:
            raise ConstraintError(f"MbAcA needs 0 <= b <= c, got b={b}, c={c}")
    elif tag == "MbAbcA":
        if not 1 <= b <= c:
            raise ConstraintError(f"MbAbcA needs 1 <= b <= c, got b={b}, c={c}")
    else:
        raise ConstraintError(f"unknown A3 family {tag!r}")
    R, (x1, x2, x3), (y1, y2, y3) = _xy(3)
    third = x1 ** c * y3 + y1 ** c * x3
    if tag == "MbAbcA":
        third = third + q_poly(b, c).to_ring(R)
    comps = [x1 * y1, x1 ** b * y2 + y1 ** b * x2, third]
    fam = FamilyDescriptor(f"A3_{tag}", (b, c), 1, 2, (0,))
    zero = [0, 0, 0] if b >= 1 else None
    return _monoid(comps, [1, 0, 0], zero, fam)


def make_hirzebruch(d: int, normalized: bool = True) -> MonoidStructure:
    """Rank-2 monoids on A^4 from the two additive actions on the Hirzebruch surface F_d."""
    if d < 0:
        raise ConstraintError("d must be >= 0")
    if d == 0 and not normalized:
        raise ConstraintError("F_0 has only the normalized additive action (d >= 1 required)")
    R, (x1, x2, x3, x4), (y1, y2, y3, y4) = _xy(4)
    fourth = x1 ** d * x2 * y4 + y1 ** d * y2 * x4
    if not normalized:
        fourth = fourth + x1 ** (d - 1) * y1 ** (d - 1) * x2 * y2 * x3 * y3
    comps = [x1 * y1, x2 * y2, x1 * y3 + y1 * x3, fourth]
    fam = FamilyDescriptor("hirzebruch", (d, int(normalized)), 2, 2, (0, 1))
    return _monoid(comps, [1, 1, 0, 0], [0, 0, 0, 0], fam)


# -- bilinear monoids ------------------------------------------------------------

class AlgebraError(ValueError):
    """Structure constants that are not a commutative associative unital algebra."""

    def __init__(self, msg: str, witness: tuple[int, ...] | None = None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class AlgebraStructureConstants:
    """gamma[k][i][j] is the coefficient of e_k in e_i * e_j (0-based)."""

    dim: int
    gamma: tuple
    unit: tuple[Fraction, ...]
    name: str | None = field(default=None, compare=False)

    @classmethod
    def build(cls, dim: int, gamma, unit, name: str | None = None) -> "AlgebraStructureConstants":
        g = tuple(tuple(tuple(Fraction(v) for v in row) for row in mat) for mat in gamma)
        if len(g) != dim or any(len(m) != dim or any(len(r) != dim for r in m) for m in g):
            raise AlgebraError("gamma must be dim x dim x dim")
        return cls(dim, g, tuple(Fraction(v) for v in unit), name)

    @classmethod
    def from_products(cls, dim: int, products: dict[tuple[int, int], dict[int, int]],
                      unit, name: str | None = None) -> "AlgebraStructureConstants":
        """Build from {(i, j): {k: coeff}}; (j, i) is filled in symmetrically."""
        gamma = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), out in products.items():
            for k, v in out.items():
                gamma[k][i][j] = v
                gamma[k][j][i] = v
        return cls.build(dim, gamma, unit, name)

    def product(self, u: Sequence, v: Sequence) -> tuple[Fraction, ...]:
        n = self.dim
        return tuple(sum((self.gamma[k][i][j] * u[i] * v[j]
                          for i in range(n) for j in range(n) if u[i] and v[j]), Fraction(0))
                     for k in range(n))

    def basis(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def check(self) -> None:
        """Raise :class:`AlgebraError` with a witness unless commutative, associative, unital."""
        n = self.dim
        for k, i, j in itertools.product(range(n), repeat=3):
            if self.gamma[k][i][j] != self.gamma[k][j][i]:
                raise AlgebraError(f"not commutative at e{i + 1}*e{j + 1}", (i, j))
        for i, j, l in itertools.product(range(n), repeat=3):
            ei, ej, el = self.basis(i), self.basis(j), self.basis(l)
            if self.product(self.product(ei, ej), el) != self.product(ei, self.product(ej, el)):
                raise AlgebraError(f"not associative at (e{i + 1}, e{j + 1}, e{l + 1})", (i, j, l))
        for i in range(n):
            if self.product(self.unit, self.basis(i)) != self.basis(i):
                raise AlgebraError(f"unit fails on e{i + 1}", (i,))

    def to_json(self) -> dict:
        return {"dim": self.dim, "name": self.name,
                "gamma": [[[str(v) for v in row] for row in m] for m in self.gamma],
                "unit": [str(v) for v in self.unit]}

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraStructureConstants":
        return cls.build(int(data["dim"]), data["gamma"], data["unit"], data.get("name"))


def make_truncated_poly_algebra(n: int) -> AlgebraStructureConstants:
    """K[T]/(T^n) in the basis 1, T, ..., T^(n-1)."""
    if n < 1:
        raise ConstraintError("n must be >= 1")
    products = {(i, j): {i + j: 1} for i in range(n) for j in range(i, n) if i + j < n}
    return AlgebraStructureConstants.from_products(n, products, [1] + [0] * (n - 1),
                                                   f"K[T]/(T^{n})")


# name -> (constants, rank, torus block)
def _presets():
    return {
        "k3": (AlgebraStructureConstants.from_products(
            3, {(0, 0): {0: 1}, (1, 1): {1: 1}, (2, 2): {2: 1}}, [1, 1, 1], "K+K+K"), 3, (0, 1, 2)),
        "k-kt2": (AlgebraStructureConstants.from_products(
            3, {(0, 0): {0: 1}, (1, 1): {1: 1}, (1, 2): {2: 1}}, [1, 1, 0], "K+K[T]/(T^2)"), 2, (0, 1)),
        "kt1t2": (AlgebraStructureConstants.from_products(
            3, {(0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}}, [1, 0, 0],
            "K[T1,T2]/(T1^2,T1T2,T2^2)"), 1, (0,)),
        "kt3": (make_truncated_poly_algebra(3), 1, (0,)),
    }


PRESET_ALGEBRAS = tuple(_presets())


def preset_algebra(name: str) -> AlgebraStructureConstants:
    try:
        return _presets()[name][0]
    except KeyError:
        raise ConstraintError(f"unknown algebra preset {name!r}; choose from {PRESET_ALGEBRAS}") from None


def make_bilinear(A: AlgebraStructureConstants, rank: int | None = None,
                  torus: Sequence[int] | None = None, tag: str = "bilinear_algebra",
                  params: Sequence[int] | None = None) -> MonoidStructure:
    """x*y = (sum gamma^(k)_ij x_i y_j)_k; unit is the algebra unit, zero the origin."""
    A.check()
    n = A.dim
    R, x, y = _xy(n)
    comps = []
    for k in range(n):
        p = R.zero()
        for i in range(n):
            for j in range(n):
                if A.gamma[k][i][j]:
                    p = p + x[i] * y[j] * A.gamma[k][i][j]
        comps.append(p)
    fam = FamilyDescriptor(tag, tuple(params) if params is not None else (n,), rank,
                           None if rank is None else n - rank,
                           None if torus is None else tuple(torus), A.name)
    return _monoid(comps, A.unit, [0] * n, fam)


def make_bilinear_preset(name: str) -> MonoidStructure:
    A, rank, torus = _presets()[name] if name in _presets() else (preset_algebra(name), None, None)
    return make_bilinear(A, rank, torus)


def make_truncated(n: int) -> MonoidStructure:
    """Multiplicative monoid of K[T]/(T^n): a local algebra, rank 1."""
    return make_bilinear(make_truncated_poly_algebra(n), 1, (0,), "local_truncated", (n,))


# -- group actions behind the families ---------------------------------------------

@dataclass(frozen=True)
class GroupAction:
    """Action of T x G_a^s with the data needed to turn it into a monoid."""

    action: PolyAutomorphism
    base: tuple[Fraction, ...]
    inversion: dict = field(compare=False)
    torus_params: tuple[str, ...] = ()
    additive_params: tuple[str, ...] = ()


def torus_scaling(n: int, weights: Sequence[Sequence[int]], names: Sequence[str]) -> PolyAutomorphism:
    """x_i -> prod_j t_j^(weights[i][j]) * x_i with the t_j invertible."""
    ring = Ring.coords(n, extra=names, laurent=names)
    x = ring.gens()[:n]
    t = [ring.gen(s) for s in names]
    comps, inv = [], []
    for i in range(n):
        m = ring.one()
        for tj, w in zip(t, weights[i]):
            m = m * tj ** w
        comps.append(m * x[i])
        inv.append(m ** -1 * x[i])
    return PolyAutomorphism(ring, tuple(comps), tuple(inv))


def demazure_derivation(n: int, b: Sequence[int]) -> Derivation:
    """x^b d/dx_n with b = (b_1, ..., b_{n-1})."""
    R = Ring.coords(n)
    x = R.gens()
    xb = R.one()
    for i, e in enumerate(b):
        xb = xb * x[i] ** e
    return Derivation.from_map(R, {f"x{n}": xb})


def demazure_action(n: int, b: Sequence[int]) -> GroupAction:
    """t exp(a delta) x = (t1 x1, ..., t_{n-1} x_{n-1}, t^b (x_n + a x^b))."""
    b = tuple(b)
    ts = tuple(f"t{i}" for i in range(1, n))
    weights = [[int(i == j) for j in range(n - 1)] for i in range(n - 1)] + [list(b)]
    act = compose(torus_scaling(n, weights, ts), exp_action(demazure_derivation(n, b), "a"))
    Y = Ring.coords(n, "y", laurent=[f"y{i}" for i in range(1, n + 1)])
    y = Y.gens()
    yb = Y.one()
    for i, e in enumerate(b):
        yb = yb * y[i] ** e
    inversion = {f"t{i}": y[i - 1] for i in range(1, n)}
    inversion["a"] = yb ** -1 * y[-1]
    return GroupAction(act, (Fraction(1),) * (n - 1) + (Fraction(0),), inversion, ts, ("a",))


A3_PARAMS = ("a1", "a2")


def a3_derivations(b: int, c: int, alpha) -> tuple[Derivation, Derivation]:
    """delta1: x2 -> x1^b, x3 -> alpha x1^e x2^d;  delta2: x3 -> x1^c."""
    d, e = divmod_bc(b, c)
    R = Ring.coords(3)
    x1, x2, x3 = R.gens()
    d1 = Derivation.from_map(R, {"x2": x1 ** b, "x3": x1 ** e * x2 ** d * Fraction(alpha)})
    d2 = Derivation.from_map(R, {"x3": x1 ** c})
    return d1, d2


def combined_derivation(derivs: Sequence[Derivation], params: Sequence[str]) -> Derivation:
    """sum_i params[i] * derivs[i] over the ring extended by the formal params."""
    ring = derivs[0].ring.union(Ring(tuple(params)))
    total = Derivation.zero(ring, derivs[0].n)
    for dv, p in zip(derivs, params):
        total = total + dv.extend(ring).scale(ring.gen(p))
    return total


def a3_unipotent_action(b: int, c: int, alpha) -> PolyAutomorphism:
    """exp(a1 delta1 + a2 delta2) on A^3."""
    return exp_action(combined_derivation(a3_derivations(b, c, alpha), A3_PARAMS))


def a3_group_action(b: int, c: int, alpha) -> GroupAction:
    """t exp(a1 delta1 + a2 delta2) with torus weights (1, b, c), base point (1, 0, 0)."""
    if not 1 <= b <= c:
        raise ConstraintError(f"need 1 <= b <= c, got b={b}, c={c}")
    d, e = divmod_bc(b, c)
    act = compose(torus_scaling(3, [[1], [b], [c]], ["t"]), a3_unipotent_action(b, c, alpha))
    Y = Ring.coords(3, "y", laurent=["y1", "y2", "y3"])
    y1, y2, y3 = Y.gens()
    scale = Fraction(alpha) / (d + 1)
    inversion = {"t": y1, "a1": y1 ** -b * y2,
                 "a2": y1 ** -c * y3 - y1 ** (-b * (d + 1)) * y2 ** (d + 1) * scale}
    return GroupAction(act, (Fraction(1), Fraction(0), Fraction(0)), inversion, ("t",), A3_PARAMS)


def hirzebruch_weights(d: int) -> tuple[tuple[int, int], ...]:
    """Z^2-grading of the total coordinate ring of F_d."""
    return ((1, 0), (0, 1), (1, 0), (d, 1))


def hirzebruch_derivations(d: int, normalized: bool) -> tuple[Derivation, Derivation]:
    R = Ring.coords(4)
    x1, x2, x3, x4 = R.gens()
    d2 = Derivation.from_map(R, {"x4": x1 ** d * x2})
    if normalized:
        d1 = Derivation.from_map(R, {"x3": x1})
    else:
        if d < 1:
            raise ConstraintError("the non-normalized action needs d >= 1")
        d1 = Derivation.from_map(R, {"x3": x1, "x4": x1 ** (d - 1) * x2 * x3})
    return d1, d2


def hirzebruch_unipotent_action(d: int, normalized: bool) -> PolyAutomorphism:
    """G_a^2 part of the lifted additive action on the total coordinate space of F_d."""
    return exp_action(combined_derivation(hirzebruch_derivations(d, normalized), A3_PARAMS))


def hirzebruch_group_action(d: int, normalized: bool) -> GroupAction:
    weights = hirzebruch_weights(d)
    act = compose(torus_scaling(4, weights, ["t1", "t2"]),
                  hirzebruch_unipotent_action(d, normalized))
    Y = Ring.coords(4, "y", laurent=["y1", "y2", "y3", "y4"])
    y1, y2, y3, y4 = Y.gens()
    a1 = y1 ** -1 * y3
    a2 = y1 ** -d * y2 ** -1 * y4
    if not normalized:
        a2 = a2 - a1 * a1 * Fraction(1, 2)
    inversion = {"t1": y1, "t2": y2, "a1": a1, "a2": a2}
    base = (Fraction(1), Fraction(1), Fraction(0), Fraction(0))
    return GroupAction(act, base, inversion, ("t1", "t2"), A3_PARAMS)


# -- enumeration for sweeps ------------------------------------------------------

def catalog_matrix(max_n: int = 4, max_param: int = 5, max_d: int | None = None):
    """Every catalog monoid with n <= max_n and parameters <= max_param."""
    max_d = max_param if max_d is None else max_d
    out = []
    for n in range(1, max_n + 1):
        out.append(make_rank0(n))
        out.append(make_toric(n))
        if n >= 2:
            for b in itertools.combinations_with_replacement(range(max_param + 1), n - 1):
                out.append(make_corank1(n, b))
    for b in range(max_param + 1):
        for c in range(b, max_param + 1):
            out.append(make_A3("MbAcA", b, c))
            if b >= 1:
                out.append(make_A3("MbAbcA", b, c))
    for name in PRESET_ALGEBRAS:
        out.append(make_bilinear_preset(name))
    for n in range(1, max_n + 1):
        out.append(make_truncated(n))
    for d in range(max_d + 1):
        out.append(make_hirzebruch(d, True))
        if d >= 1:
            out.append(make_hirzebruch(d, False))
    return out


FAMILY_CONSTRAINTS = {
    "rank0": "n >= 1; (x1+y1, ..., xn+yn)",
    "toric": "n >= 1; (x1*y1, ..., xn*yn)",
    "corank1": "n >= 2, b = b1 <= ... <= b_{n-1}, all >= 0",
    "a3-mbaca": "0 <= b <= c",
    "a3-mbabca": "1 <= b <= c",
    "a3-mmbca": "0 <= b <= c",
    "bilinear": f"--algebra one of {', '.join(PRESET_ALGEBRAS)} or --constants FILE",
    "truncated": "n >= 1; K[T]/(T^n)",
    "hirzebruch": "d >= 0; --non-normalized needs d >= 1",
}


def is_verified(S: MonoidStructure, seed: int = 0) -> bool:
    return all(verify_all(S, seed))
