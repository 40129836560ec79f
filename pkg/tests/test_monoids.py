from fractions import Fraction

import pytest
import sympy as sp

from affmonoid.catalog import demazure_action, make_corank1, make_toric
from affmonoid.derivations import PolyAutomorphism
from affmonoid.monoids import (EmbeddingNotPolynomial, MonoidStructure, associativity_sides,
                               monoid_from_action, multiply, power, verify_all,
                               verify_associative, verify_commutative, verify_unit, verify_zero)
from affmonoid.polycore import Ring
from oracles import mu_sympy, to_sympy


def ma():
    return MonoidStructure.from_components(["x1*y1", "x1*y2 + x2*y1"], unit=(1, 0), zero=(0, 0))


def test_axioms_hold_for_dual_numbers_monoid():
    S = ma()
    assert all(verify_all(S))
    assert multiply(S, (2, 3), (5, 7)) == (10, 29)


def test_commutativity_witness():
    S = MonoidStructure.from_components(["x1*y1", "x1*y2"], unit=(1, 0))
    chk = verify_commutative(S, seed=3)
    assert not chk
    assert chk.component == 1
    assert chk.lhs != chk.rhs
    # the witness point really separates the two sides
    p = chk.point
    assert S.components[1].evaluate(p) == chk.lhs


def test_associativity_witness():
    S = MonoidStructure.from_components(["x1*y1 + x1 + y1"], unit=(0,))
    assert verify_associative(S)
    T = MonoidStructure.from_components(["x1^2*y1 + x1*y1^2"])
    chk = verify_associative(T, seed=1)
    assert not chk and chk.component == 0 and chk.point is not None
    x, y, z = chk.point
    lhs = multiply(T, multiply(T, (x,), (y,)), (z,))
    rhs = multiply(T, (x,), multiply(T, (y,), (z,)))
    assert (lhs[0], rhs[0]) == (chk.lhs, chk.rhs)


def test_associativity_sides_match_sympy():
    S = make_corank1(3, (1, 2))
    lhs, rhs = associativity_sides(S)
    mu = mu_sympy(S.components, 3)
    xs, ys, zs = (sp.symbols(f"{v}1:4") for v in "xyz")
    ref = mu(mu(xs, ys), zs)
    syms = sp.symbols(lhs[0].ring.names)
    for l, r in zip(lhs, ref):
        assert sp.expand(to_sympy(l, syms) - r) == 0
    assert lhs == rhs


def test_unit_and_zero_checks():
    S = ma()
    assert verify_unit(S)
    assert not verify_unit(S, (0, 1))
    assert verify_zero(S)
    assert not verify_zero(S, (1, 1))
    nounit = MonoidStructure.from_components(["x1*y1"])
    assert not verify_unit(nounit)


def test_power():
    S = make_toric(2)
    assert power(S, (2, 3), 5) == (32, 243)
    assert power(S, (2, 3), 0) == (1, 1)
    with pytest.raises(ValueError):
        power(S, (2, 3), -1)


def test_json_round_trip_keeps_metadata():
    S = make_corank1(3, (1, 2))
    T = MonoidStructure.from_json(S.to_json())
    assert T == S
    assert T.family.tag == "A3_MMbcA"


def test_rejects_bad_shapes():
    with pytest.raises(ValueError):
        MonoidStructure.from_components(["x1*y1"], unit=(1, 0))
    with pytest.raises(ValueError):
        MonoidStructure.from_json({"dim": 2, "mu": ["x1*y1"]})


def test_monoid_from_demazure_action():
    g = demazure_action(3, (1, 2))
    S = monoid_from_action(g.action, g.base, g.inversion)
    assert S.mu == make_corank1(3, (1, 2)).mu
    assert S.unit == (1, 1, 0)


def test_monoid_from_action_requires_polynomial_product():
    # (t x1, t^-1 (x2 + a)) is the corank-one recipe with exponent b = -1
    ring = Ring.of("x1", "x2", "t", "a", laurent=["t"])
    x1, x2, t, a = ring.gens()
    act = PolyAutomorphism(ring, (t * x1, t ** -1 * (x2 + a)))
    Y = Ring.coords(2, "y", laurent=["y1", "y2"])
    y1, y2 = Y.gens()
    with pytest.raises(EmbeddingNotPolynomial):
        monoid_from_action(act, (1, 0), {"t": y1, "a": y1 * y2})


def test_monoid_from_action_checks_inversion():
    g = demazure_action(2, (1,))
    Y = Ring.coords(2, "y", laurent=["y1", "y2"])
    bad = dict(g.inversion, a=Y.gen("y2"))
    with pytest.raises(ValueError):
        monoid_from_action(g.action, g.base, bad)
    with pytest.raises(KeyError):
        monoid_from_action(g.action, g.base, {"t1": Y.gen("y1")})
