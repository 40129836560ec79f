"""Commuting pairs of degree-zero LNDs on graded K[x1, x2, x3] and the
invariants separating the two rank-one monoid families on A^3.

``normalize_pair`` brings a valid pair to one of two normal forms:

* Type 1: delta_i(x2) = beta_i x1^b, delta_i(x3) = gamma_i x1^c + beta_i x1^e x2^d
* Type 2: delta_i(x2) = beta_i x1^b, delta_i(x3) = gamma_i x1^c

with c = b*d + e, 0 <= e < b.  The change of variables is built in three
stages: a simultaneous triangular flag on the equal-weight blocks, the
extraction of the common polynomial P with P_i = beta_i P + gamma_i x1^c,
and the homogeneous substitution for x3 that removes the lower terms of P.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .catalog import (A3_PARAMS, ConstraintError, a3_group_action, a3_unipotent_action,
                      divmod_bc)
from .derivations import (Derivation, Grading, PolyAutomorphism, commutator, compose,
                          conjugate, degree_of_derivation, is_locally_nilpotent)
from .polycore import Poly, Ring, random_point, random_rational

COORDS = Ring.coords(3)


class NormalizationError(ValueError):
    """The pair cannot be brought to normal form."""


# -- pairs -----------------------------------------------------------------------

def _check_weights(weights: Sequence[int]) -> tuple[int, int, int]:
    w = tuple(int(v) for v in weights)
    if len(w) != 3:
        raise ValueError("weights must be a triple (a, b, c)")
    a, b, c = w
    if not 0 < a <= b <= c:
        raise ValueError(f"weights must satisfy 0 < a <= b <= c, got {w}")
    if math.gcd(a, b, c) != 1:
        raise ValueError(f"weights must have gcd 1, got {w}")
    return w


@dataclass(frozen=True)
class CommutingPair:
    weights: tuple[int, int, int]
    delta1: Derivation
    delta2: Derivation

    def __post_init__(self):
        object.__setattr__(self, "weights", _check_weights(self.weights))
        for dv in (self.delta1, self.delta2):
            if dv.ring != COORDS or dv.n != 3:
                raise ValueError("pair derivations must act on x1, x2, x3")

    @classmethod
    def from_images(cls, weights, images1: Mapping[str, Poly | str],
                    images2: Mapping[str, Poly | str]) -> "CommutingPair":
        return cls(tuple(weights), Derivation.from_map(COORDS, images1),
                   Derivation.from_map(COORDS, images2))

    @property
    def grading(self) -> Grading:
        return Grading.of(self.weights)

    @property
    def derivations(self) -> tuple[Derivation, Derivation]:
        return self.delta1, self.delta2

    def conjugate(self, phi: PolyAutomorphism) -> "CommutingPair":
        return CommutingPair(self.weights, conjugate(self.delta1, phi), conjugate(self.delta2, phi))

    def to_json(self) -> dict:
        return {"weights": list(self.weights),
                "delta1": {x: str(p) for x, p in zip(COORDS.names, self.delta1.images)},
                "delta2": {x: str(p) for x, p in zip(COORDS.names, self.delta2.images)}}

    @classmethod
    def from_json(cls, data: dict) -> "CommutingPair":
        def deriv(d):
            if isinstance(d, dict) and "images" in d:
                return Derivation.from_json(d, COORDS)
            return Derivation.from_map(COORDS, {k: str(v) for k, v in d.items()})
        return cls(tuple(data["weights"]), deriv(data["delta1"]), deriv(data["delta2"]))


@dataclass(frozen=True)
class PairDiagnostics:
    valid: bool
    failures: tuple[str, ...]
    kernel_dim: int | None

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        return {"valid": self.valid, "failures": list(self.failures), "kernel_dim": self.kernel_dim}


def linear_kernel(derivs: Sequence[Derivation]) -> list[list[Fraction]]:
    """Basis of linear forms v1 x1 + v2 x2 + v3 x3 killed by every derivation."""
    rows: dict[tuple, list[Fraction]] = {}
    for k, dv in enumerate(derivs):
        for j, img in enumerate(dv.images):
            for exps, coeff in img.items():
                rows.setdefault((k, exps), [Fraction(0)] * dv.n)[j] += coeff
    return linalg.nullspace(list(rows.values()), derivs[0].n)


def validate_pair(p: CommutingPair) -> PairDiagnostics:
    """Check degree zero, commuting, local nilpotency and dim of the linear kernel <= 1."""
    failures = []
    g = p.grading
    homogeneous = True
    for i, dv in enumerate(p.derivations, 1):
        deg = degree_of_derivation(dv, g)
        if deg != 0:
            homogeneous = False
            failures.append(f"delta{i} is not homogeneous of degree 0 (degree {deg})")
    if not commutator(p.delta1, p.delta2).is_zero():
        failures.append("delta1 and delta2 do not commute")
    if homogeneous:
        for i, dv in enumerate(p.derivations, 1):
            if not is_locally_nilpotent(dv, g):
                failures.append(f"delta{i} is not locally nilpotent")
    kdim = len(linear_kernel(p.derivations))
    if kdim > 1:
        failures.append(f"common kernel on the linear forms has dimension {kdim} > 1")
    return PairDiagnostics(not failures, tuple(failures), kdim)


# -- step 1: triangular flag ---------------------------------------------------------

def _reduce(v: list[Fraction], flag_rref: tuple[list[list[Fraction]], list[int]]) -> list[Fraction]:
    rows, pivots = flag_rref
    v = list(v)
    for row, p in zip(rows, pivots):
        if v[p]:
            f = v[p]
            v = [a - f * r for a, r in zip(v, row)]
    return v


def triangular_flag(mats: Sequence[Sequence[Sequence[Fraction]]]) -> list[list[Fraction]]:
    """Basis f_1..f_m with M(f_k) in span(f_1..f_{k-1}) for every M.

    Vectors are rows; a map acts by v -> v M.  Each f_k is the first
    null-space basis vector not already in the flag, reduced against the
    flag and scaled to leading coefficient 1.
    """
    m = len(mats[0])
    flag: list[list[Fraction]] = []
    while len(flag) < m:
        ann = linalg.nullspace(flag, m) if flag else linalg.identity(m)
        conds = []
        for M in mats:
            for n in ann:
                conds.append([sum((M[j][k] * n[k] for k in range(m)), Fraction(0)) for j in range(m)])
        cands = linalg.nullspace(conds, m) if conds else linalg.identity(m)
        red = linalg.rref(flag) if flag else ([], [])
        for v in cands:
            v = _reduce(v, red)
            if any(v):
                lead = next(a for a in v if a)
                flag.append([a / lead for a in v])
                break
        else:
            raise NormalizationError("the induced linear maps are not commuting nilpotent")
    return flag


def _block_matrix(dv: Derivation, block: Sequence[int]) -> list[list[Fraction]]:
    """Matrix of dv on the span of the given coordinates, dropping everything else."""
    out = []
    for j in block:
        img = dv.images[j]
        row = []
        for k in block:
            exps = tuple(int(i == k) for i in range(3))
            row.append(img.coeff(exps))
        out.append(row)
    return out


def _linear_change(rows: list[list[Fraction]]) -> PolyAutomorphism:
    x = COORDS.gens()
    inv = linalg.inverse(rows)
    # new x~_k = sum_j rows[k][j] x_j, so x = inv-transposed applied to x~
    comps = tuple(sum((x[j] * rows[k][j] for j in range(3) if rows[k][j]), COORDS.zero())
                  for k in range(3))
    back = tuple(sum((x[k] * inv[j][k] for k in range(3) if inv[j][k]), COORDS.zero())
                 for j in range(3))
    return PolyAutomorphism(COORDS, comps, back)


def step1_change(p: CommutingPair) -> tuple[str, PolyAutomorphism]:
    """Case label and the linear change making the pair triangular."""
    a, b, c = p.weights
    if a == b == c:
        case, block = "A", [0, 1, 2]
    elif a == b < c:
        case, block = "B", [0, 1]
        if c % a:
            raise NormalizationError("kernel condition violated: a = b < c with a not dividing c")
    elif a < b == c:
        case, block = "C", [1, 2]
        if b % a:
            raise NormalizationError("kernel condition violated: a < b = c with a not dividing b")
    else:
        case, block = "D", []
        if b % a or c % a:
            raise NormalizationError("kernel condition violated: a < b < c with a not dividing b or c")
    if a != 1:
        raise NormalizationError("kernel condition violated: smallest weight must be 1")
    rows = linalg.identity(3)
    if block:
        flag = triangular_flag([_block_matrix(dv, block) for dv in p.derivations])
        for new_k, vec in zip(block, flag):
            rows[new_k] = [Fraction(0)] * 3
            for j, v in zip(block, vec):
                rows[new_k][j] = v
    return case, _linear_change(rows)


# -- steps 2 and 3 ----------------------------------------------------------------

def _mono(i1: int, i2: int, i3: int = 0) -> tuple[int, int, int]:
    return (i1, i2, i3)


def _read_triangular(dv: Derivation, b: int, c: int, d: int) -> tuple[Fraction, list[Fraction]]:
    """beta and xi_0..xi_d from delta(x2) = beta x1^b, delta(x3) = sum xi_l x1^(c-bl) x2^l."""
    x1img, x2img, x3img = dv.images
    if x1img:
        raise NormalizationError(f"delta(x1) = {x1img} is not zero after triangularization")
    beta = x2img.coeff(_mono(b, 0))
    if x2img != COORDS.monomial({"x1": b}, beta):
        raise NormalizationError(f"delta(x2) = {x2img} is not a multiple of x1^{b}")
    xi = [x3img.coeff(_mono(c - b * l, l)) for l in range(d + 1)]
    expected = sum((COORDS.monomial({"x1": c - b * l, "x2": l}, xi[l]) for l in range(d + 1)),
                   COORDS.zero())
    if x3img != expected:
        raise NormalizationError(f"delta(x3) = {x3img} is not a polynomial in x1, x2 of weight {c}")
    return beta, xi


def normal_form(weights: Sequence[int], ntype: int, beta: Sequence, gamma: Sequence) -> CommutingPair:
    """The Type 1 or Type 2 pair with the given beta and gamma."""
    _, b, c = _check_weights(weights)
    d, e = divmod_bc(b, c)
    x1, x2, _ = COORDS.gens()
    ders = []
    for bi, gi in zip(beta, gamma):
        x3img = x1 ** c * Fraction(gi)
        if ntype == 1:
            x3img = x3img + x1 ** e * x2 ** d * Fraction(bi)
        elif ntype != 2:
            raise ValueError("type must be 1 or 2")
        ders.append(Derivation.from_map(COORDS, {"x2": x1 ** b * Fraction(bi), "x3": x3img}))
    return CommutingPair(tuple(weights), ders[0], ders[1])


@dataclass(frozen=True)
class NormalizationResult:
    type: int
    b: int
    c: int
    d: int
    e: int
    beta: tuple[Fraction, Fraction]
    gamma: tuple[Fraction, Fraction]
    change_of_variables: PolyAutomorphism
    normalized: CommutingPair
    case: str
    xi: tuple[Fraction, ...] = field(default=(), compare=False)

    @property
    def params(self) -> tuple:
        return (self.b, self.c, self.d, self.e, *self.beta, *self.gamma)

    def to_json(self) -> dict:
        return {
            "type": self.type, "case": self.case,
            "params": {"b": self.b, "c": self.c, "d": self.d, "e": self.e,
                       "beta": [str(v) for v in self.beta], "gamma": [str(v) for v in self.gamma]},
            "xi": [str(v) for v in self.xi],
            "change_of_variables": [str(p) for p in self.change_of_variables.components],
            "inverse_change": [str(p) for p in self.change_of_variables.inverse],
            "normalized": self.normalized.to_json(),
        }


def normalize_pair(p: CommutingPair) -> NormalizationResult:
    diag = validate_pair(p)
    if not diag:
        raise NormalizationError("invalid pair: " + "; ".join(diag.failures))
    _, b, c = p.weights
    d, e = divmod_bc(b, c)
    case, phi1 = step1_change(p)
    tri = p.conjugate(phi1)

    # step 2: P_i = beta_i P + gamma_i x1^c
    read = [_read_triangular(dv, b, c, d) for dv in tri.derivations]
    beta = tuple(r[0] for r in read)
    gamma = tuple(r[1][0] for r in read)
    j = next((i for i, bi in enumerate(beta) if bi), None)
    if j is None:
        raise NormalizationError("both derivations kill x2; kernel condition violated")
    xi = [Fraction(0)] + [read[j][1][l] / beta[j] for l in range(1, d + 1)]
    for bi, (_, xis) in zip(beta, read):
        if any(xis[l] != bi * xi[l] for l in range(1, d + 1)):
            raise NormalizationError("x2-parts of delta1(x3), delta2(x3) are not proportional to beta")

    # step 3: x3~ = alpha (x3 - sum_{l=1}^{d-1} xi_l/(l+1) x1^(c-b(l+1)) x2^(l+1))
    x1, x2, x3 = COORDS.gens()
    shift = sum((x1 ** (c - b * (l + 1)) * x2 ** (l + 1) * (xi[l] / (l + 1))
                 for l in range(1, d) if xi[l]), COORDS.zero())
    alpha = 1 / xi[d] if xi[d] else Fraction(1)
    phi3 = PolyAutomorphism(COORDS, (x1, x2, (x3 - shift) * alpha), (x1, x2, x3 / alpha + shift))
    phi = compose(phi3, phi1)
    ntype = 1 if xi[d] else 2
    gamma = tuple(g * alpha for g in gamma)
    normalized = normal_form(p.weights, ntype, beta, gamma)
    if p.conjugate(phi) != normalized:
        raise NormalizationError("internal: conjugated pair differs from the normal form")
    return NormalizationResult(ntype, b, c, d, e, beta, gamma, phi, normalized, case, tuple(xi))


# -- random valid pairs and graded automorphisms ---------------------------------------

def _weight_monomials(weights: Sequence[int], target: int, below: int) -> list[tuple[int, ...]]:
    """Exponents in coordinates of weight < below with total weight target."""
    idx = [i for i, w in enumerate(weights) if w < below]
    out = []

    def rec(k, acc, total):
        if k == len(idx):
            if total == target:
                e = [0] * len(weights)
                for i, v in zip(idx, acc):
                    e[i] = v
                out.append(tuple(e))
            return
        w = weights[idx[k]]
        v = 0
        while total + v * w <= target:
            rec(k + 1, acc + [v], total + v * w)
            v += 1

    rec(0, [], 0)
    return out


def random_graded_automorphism(weights: Sequence[int], rng: random.Random,
                               bound: int = 5, triangular: bool = False) -> PolyAutomorphism:
    """Random weight-preserving automorphism of K[x1, x2, x3] with its inverse.

    Equal-weight coordinates are mixed by a random invertible matrix (upper
    unitriangular times diagonal when ``triangular``); each coordinate also
    gains a random combination of monomials in lower-weight coordinates.
    """
    x = COORDS.gens()
    comps: list[Poly | None] = [None] * 3
    back: list[Poly | None] = [None] * 3
    for w in sorted(set(weights)):
        block = [i for i in range(3) if weights[i] == w]
        k = len(block)
        while True:
            if triangular:
                M = [[Fraction(0)] * k for _ in range(k)]
                for r in range(k):
                    M[r][r] = Fraction(rng.choice([v for v in range(-bound, bound + 1) if v]))
                    for s in range(r + 1, k):
                        M[r][s] = Fraction(rng.randint(-bound, bound))
            else:
                M = [[Fraction(rng.randint(-bound, bound)) for _ in range(k)] for _ in range(k)]
            if linalg.det(M):
                break
        Minv = linalg.inverse(M)
        lower = []
        for r in range(k):
            tail = COORDS.zero()
            for exps in _weight_monomials(weights, w, w):
                coef = rng.randint(-bound, bound)
                if coef:
                    tail = tail + Poly(COORDS, {exps: coef})
            lower.append(tail)
        for r, i in enumerate(block):
            comps[i] = sum((x[j] * M[r][s] for s, j in enumerate(block) if M[r][s]),
                           COORDS.zero()) + lower[r]
        # x_block = Minv (x~_block - lower(x_lower)), with x_lower already inverted
        lower_back = [t.substitute({COORDS.names[i]: back[i] for i in range(3)
                                    if back[i] is not None}, COORDS) for t in lower]
        for r, i in enumerate(block):
            back[i] = sum(((x[j] - lower_back[s]) * Minv[r][s]
                           for s, j in enumerate(block) if Minv[r][s]), COORDS.zero())
    return PolyAutomorphism(COORDS, tuple(comps), tuple(back))


def random_triangular_pair(weights: Sequence[int], rng: random.Random,
                           bound: int = 5) -> CommutingPair:
    """Random commuting pair already in triangular form, not necessarily valid."""
    _, b, c = _check_weights(weights)
    d, _ = divmod_bc(b, c)
    x1, x2, _ = COORDS.gens()
    beta = [random_rational(rng, bound) for _ in range(2)]
    while not any(beta):
        beta = [random_rational(rng, bound) for _ in range(2)]
    gamma = [random_rational(rng, bound) for _ in range(2)]
    xi = [random_rational(rng, bound) if rng.random() < 0.7 else Fraction(0) for _ in range(d + 1)]
    if rng.random() < 0.4:
        xi[d] = Fraction(0)
    P = sum((x1 ** (c - b * l) * x2 ** l * xi[l] for l in range(1, d + 1) if xi[l]), COORDS.zero())
    ders = [Derivation.from_map(COORDS, {"x2": x1 ** b * bi, "x3": P * bi + x1 ** c * gi})
            for bi, gi in zip(beta, gamma)]
    return CommutingPair(tuple(weights), ders[0], ders[1])


def random_valid_pair(weights: Sequence[int], rng: random.Random, bound: int = 5,
                      max_tries: int = 100) -> CommutingPair:
    """A valid pair: random triangular pair conjugated by a random graded automorphism.

    The triangular pair is drawn with beta1*gamma2 != beta2*gamma1, i.e. with
    delta1, delta2 independent at a generic point.  Their common kernel is
    then K[x1], so the linear-kernel condition survives every graded change
    of coordinates.
    """
    for _ in range(max_tries):
        p = random_triangular_pair(weights, rng, bound)
        (_, b1, _), (_, b2, _) = (dv.images for dv in p.derivations)
        _, b, c = p.weights
        g1 = p.delta1.images[2].coeff((c, 0, 0))
        g2 = p.delta2.images[2].coeff((c, 0, 0))
        if b1.coeff((b, 0, 0)) * g2 == b2.coeff((b, 0, 0)) * g1:
            continue
        q = p.conjugate(random_graded_automorphism(p.weights, rng, bound))
        if validate_pair(q):
            return q
    raise RuntimeError(f"no valid pair found for weights {tuple(weights)}")


# -- actions on A^3 and stabilizers -----------------------------------------------------

FAMILIES_A3 = ("MbAbcA", "MbAcA")


def _alpha_for(tag: str, b: int, c: int) -> int:
    tag = tag.removeprefix("A3_")
    if tag not in FAMILIES_A3:
        raise ConstraintError(f"family must be one of {FAMILIES_A3}, got {tag!r}")
    if not 1 <= b <= c:
        raise ConstraintError(f"need 1 <= b <= c, got b={b}, c={c}")
    d, _ = divmod_bc(b, c)
    return d + 1 if tag == "MbAbcA" else 0


def a3_action(tag: str, b: int, c: int) -> PolyAutomorphism:
    """t exp(a1 delta1 + a2 delta2) on A^3, parameters (t, a1, a2), t invertible."""
    return a3_group_action(b, c, _alpha_for(tag, b, c)).action


@dataclass(frozen=True)
class StabilizerReport:
    tag: str
    b: int
    c: int
    f: Poly
    kind: str  # "origin", "line" or "plane"
    line: tuple[Fraction, Fraction] | None = None  # (p, q): p*a1 + q*a2 = 0
    equations: tuple[Poly, ...] = field(default=(), compare=False)

    def direction(self) -> tuple[Fraction, Fraction] | None:
        if self.line is None:
            return None
        p, q = self.line
        return (q, -p) if q else (Fraction(0), Fraction(1))

    def contains(self, a1, a2) -> bool:
        if self.kind == "plane":
            return True
        if self.kind == "origin":
            return a1 == 0 and a2 == 0
        p, q = self.line
        return p * a1 + q * a2 == 0

    def describe(self) -> str:
        if self.kind == "plane":
            return "all (alpha1, alpha2)"
        if self.kind == "origin":
            return "alpha1 = alpha2 = 0"
        p, q = self.line
        if not q:
            return "alpha1 = 0"
        if not p:
            return "alpha2 = 0"
        sign = "+" if p > 0 else "-"
        coef = "" if abs(p) == 1 else f"{abs(p)}*"
        return f"alpha2 {sign} {coef}alpha1 = 0"

    def to_json(self) -> dict:
        return {"family": self.tag, "b": self.b, "c": self.c, "f": str(self.f), "kind": self.kind,
                "line": None if self.line is None else [str(v) for v in self.line],
                "description": self.describe()}


def degree_c_element(b: int, c: int, lam, lams: Sequence = (), lam0=0) -> Poly:
    """f = lam x3 + sum_{l=0}^{d} lam_l x1^(c-bl) x2^l."""
    d, _ = divmod_bc(b, c)
    if len(lams) > d:
        raise ValueError(f"at most d = {d} coefficients lambda_1..lambda_d")
    coeffs = [Fraction(lam0)] + [Fraction(v) for v in lams] + [Fraction(0)] * (d - len(lams))
    x1, x2, x3 = COORDS.gens()
    f = x3 * Fraction(lam)
    for l, v in enumerate(coeffs):
        if v:
            f = f + x1 ** (c - b * l) * x2 ** l * v
    return f


def _univariate(p: Poly, var: str) -> list[Fraction]:
    """Coefficient list (low to high) of a polynomial in one variable."""
    i = p.ring.index(var)
    out = [Fraction(0)] * (p.degree(var) + 1 if p else 1)
    for exps, c in p.items():
        out[exps[i]] += c
    return out


def _trim(u: list[Fraction]) -> list[Fraction]:
    while len(u) > 1 and u[-1] == 0:
        u = u[:-1]
    return u


def _polymod(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    u, v = _trim(u), _trim(v)
    while len(u) >= len(v) and any(u):
        f = u[-1] / v[-1]
        shift = len(u) - len(v)
        u = [a - (f * v[k - shift] if k >= shift else 0) for k, a in enumerate(u)]
        u = _trim(u[:-1]) if len(u) > 1 else [Fraction(0)]
    return u


def _gcd(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    u, v = _trim(u), _trim(v)
    while any(v):
        u, v = v, _polymod(u, v)
    return [a / u[-1] for a in u] if any(u) else u


def _derivative(u: list[Fraction]) -> list[Fraction]:
    return [k * a for k, a in enumerate(u)][1:] or [Fraction(0)]


def _stabilizer_subspace(eqs: Sequence[Poly], A: Ring) -> tuple[str, tuple | None]:
    """Subgroup of G_a^2 cut out by equations in a1, a2: origin, a line or the plane.

    The solution set is a linear subspace, so a line through 0 lies in it iff
    its direction is a common root of all homogeneous parts.
    """
    eqs = [e for e in eqs if e]
    if not eqs:
        return "plane", None
    forms: list[Poly] = []
    for eq in eqs:
        parts: dict[int, dict] = {}
        for exps, cf in eq.items():
            parts.setdefault(sum(exps), {})[exps] = cf
        forms += [Poly(A, t) for t in parts.values()]
    if any(f.is_constant() for f in forms):
        return "origin", None
    if all(f.evaluate((0, 1)) == 0 for f in forms):
        return "line", (Fraction(1), Fraction(0))
    g: list[Fraction] | None = None
    U = Ring.of("u")
    for f in forms:
        uni = _univariate(f.substitute({"a1": U.one(), "a2": U.gen("u")}, U), "u")
        g = uni if g is None else _gcd(g, uni)
    g = _trim(g)
    if len(g) == 1:
        return "origin", None
    sq = _trim([a for a in _gcd(g, _derivative(g))])
    core = _polydiv(g, sq)
    if len(core) != 2:
        raise ArithmeticError("stabilizer is not a subgroup: several candidate lines")
    u = -core[0] / core[1]
    # direction (1, u): u*a1 - a2 = 0, normalized to a2 coefficient 1
    return "line", (-u, Fraction(1))


def _polydiv(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    u, v = _trim(list(u)), _trim(list(v))
    q = [Fraction(0)] * max(len(u) - len(v) + 1, 1)
    while len(u) >= len(v) and any(u):
        f = u[-1] / v[-1]
        shift = len(u) - len(v)
        q[shift] = f
        u = [a - (f * v[k - shift] if k >= shift else 0) for k, a in enumerate(u)]
        u = _trim(u[:-1]) if len(u) > 1 else [Fraction(0)]
    return _trim(q)


def unipotent_stabilizer(tag: str, b: int, c: int, lam, lams: Sequence = (),
                         lam0=0) -> StabilizerReport:
    """Elements (a1, a2) of G_a^2 fixing f = lam x3 + sum lam_l x1^(c-bl) x2^l.

    The fixing condition f(phi(1, a1, a2) x) = f is expanded mechanically and
    its x-coefficients give the equations in a1, a2.
    """
    U = a3_unipotent_action(b, c, _alpha_for(tag, b, c))
    f = degree_c_element(b, c, lam, lams, lam0)
    W = U.ring
    moved = f.to_ring(W).substitute(dict(zip(U.coord_names, U.components)), W) - f.to_ring(W)
    A = Ring.of(*A3_PARAMS)
    eqs: dict[tuple, Poly] = {}
    for exps, cf in moved.items():
        key = exps[:3]
        eqs[key] = eqs.get(key, A.zero()) + Poly(A, {exps[3:]: cf})
    kind, line = _stabilizer_subspace(list(eqs.values()), A)
    return StabilizerReport(tag.removeprefix("A3_"), b, c, f, kind, line,
                            tuple(eqs[k] for k in sorted(eqs)))


@dataclass(frozen=True)
class DistinguishVerdict:
    b: int
    c: int
    verdict: str
    mbabca_lines: tuple[str, ...] = ()
    mbaca_lines: tuple[str, ...] = ()
    samples: tuple[Fraction, ...] = ()

    def to_json(self) -> dict:
        return {"b": self.b, "c": self.c, "verdict": self.verdict,
                "samples": [str(s) for s in self.samples],
                "MbAbcA": {"stabilizer_lines": list(self.mbabca_lines),
                           "count": len(self.mbabca_lines)},
                "MbAcA": {"stabilizer_lines": list(self.mbaca_lines),
                          "count": len(set(self.mbaca_lines))}}


def distinguish_rank1_families(b: int, c: int, samples: Sequence = (0, 1, 2)) -> DistinguishVerdict:
    """Count stabilizer lines of degree-c elements under the two actions.

    With m = x1^(c-b) x2, the Q-family is probed on x3 + s m and s x3 + m
    and shows the single line a1 = 0; the other family is probed on
    x3 + s m and gives a distinct line a2 + s a1 = 0 for each sample s.
    """
    if not 1 <= b <= c:
        raise ConstraintError(f"need 1 <= b <= c, got b={b}, c={c}")
    distinct = tuple(sorted({Fraction(s) for s in samples}))
    if len(distinct) < 3:
        return DistinguishVerdict(b, c, "insufficient samples", samples=distinct)
    lines: dict[str, list[str]] = {}
    for tag in FAMILIES_A3:
        found = []
        forms = [(1, s) for s in distinct]
        if tag == "MbAbcA":
            forms += [(s, 1) for s in distinct]
        for lam, l1 in forms:
            rep = unipotent_stabilizer(tag, b, c, lam, [l1])
            if rep.kind == "line":
                found.append(rep.describe())
        lines[tag] = found
    abc = tuple(sorted(set(lines["MbAbcA"])))
    ac = tuple(lines["MbAcA"])
    ok = len(abc) == 1 and len(set(ac)) == len(ac) >= 3
    verdict = ("non-isomorphic, witness: stabilizer-line count "
               f"{len(abc)} vs {len(set(ac))}") if ok else "undetermined"
    return DistinguishVerdict(b, c, verdict, abc, ac, distinct)


# -- additive actions ---------------------------------------------------------------

def wpp_actions(b: int, c: int) -> tuple[PolyAutomorphism, PolyAutomorphism]:
    """The two G_a^2 actions on A^3 commuting with the (1, b, c) scaling."""
    if not 1 <= b <= c:
        raise ConstraintError(f"need 1 <= b <= c, got b={b}, c={c}")
    if math.gcd(b, c) != 1:
        raise ConstraintError(f"need gcd(b, c) = 1, got b={b}, c={c}")
    d, _ = divmod_bc(b, c)
    return a3_unipotent_action(b, c, 0), a3_unipotent_action(b, c, d + 1)


@dataclass(frozen=True)
class ActionReport:
    checks: tuple[tuple[str, bool], ...]
    jacobian_rank: int | None = None
    params: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failed(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.checks if not v)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "failed": list(self.failed),
                "jacobian_rank": self.jacobian_rank, "params": list(self.params)}


def group_law_holds(action: PolyAutomorphism) -> bool:
    """phi(a) o phi(b) == phi(a + b) as a polynomial identity."""
    ps = action.params
    pa = action.rename_params({p: f"{p}__a" for p in ps})
    pb = action.rename_params({p: f"{p}__b" for p in ps})
    lhs = compose(pa, pb)
    R = lhs.ring
    rhs = action.specialize({p: R.gen(f"{p}__a") + R.gen(f"{p}__b") for p in ps}, R)
    return lhs.components == rhs.components


def parameter_jacobian_rank(action: PolyAutomorphism, rng: random.Random) -> int:
    """Rank of d(orbit map)/d(params) at a random point and random parameters."""
    ps = action.params
    pt = random_point(rng, action.n + len(ps))
    rows = [[comp.diff(p).evaluate(pt) for p in ps] for comp in action.components]
    return linalg.rank(rows)


def verify_additive_action(action: PolyAutomorphism, grading: Grading | Sequence | None = None,
                           seed: int = 0, retries: int = 5) -> ActionReport:
    """Identity, group law, faithfulness/open orbit (Jacobian rank s), homogeneity."""
    ps = action.params
    s = len(ps)
    checks = []
    ident = action.specialize({p: 0 for p in ps}, Ring.coords(action.n))
    checks.append(("identity", ident.is_identity()))
    checks.append(("group_law", group_law_holds(action)))
    rng = random.Random(seed)
    rk = 0
    for _ in range(retries):
        rk = parameter_jacobian_rank(action, rng)
        if rk == s:
            break
    checks.append(("faithful", rk == s))
    checks.append(("open_orbit", rk == s and s <= action.n))
    if grading is not None:
        g = grading if isinstance(grading, Grading) else Grading.of(grading)
        if g.nvars != action.n:
            raise ValueError("grading must weight exactly the coordinates")
        homog = all(comp.is_zero() or g.degree(comp) == w
                    for comp, w in zip(action.components, g.weights))
        checks.append(("homogeneous", homog))
    return ActionReport(tuple(checks), rk, ps)


def translation_action(n: int) -> PolyAutomorphism:
    ring = Ring.coords(n, extra=[f"a{i}" for i in range(1, n + 1)])
    g = ring.gens()
    return PolyAutomorphism(ring, tuple(g[i] + g[n + i] for i in range(n)),
                            tuple(g[i] - g[n + i] for i in range(n)))
