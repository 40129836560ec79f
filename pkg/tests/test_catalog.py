import itertools
from fractions import Fraction

import pytest
import sympy as sp

from affmonoid import catalog
from affmonoid.catalog import (AlgebraError, AlgebraStructureConstants, ConstraintError,
                               FamilyDescriptor, make_A3, make_bilinear, make_bilinear_preset,
                               make_corank1, make_hirzebruch, make_rank0, make_toric,
                               make_truncated, make_truncated_poly_algebra, q_poly)
from affmonoid.monoids import MonoidStructure, monoid_from_action, verify_all
from affmonoid.polycore import Ring
from oracles import from_sympy, q_reference


def comps(S):
    return [str(p) for p in S.components]


def parse(n, texts):
    R = Ring.blocks(n)
    return tuple(R.parse(t) for t in texts)


# -- Q_{b,c} ---------------------------------------------------------------------

def test_q_examples():
    Q = catalog.Q_RING
    assert q_poly(1, 1) == Q.parse("2*x2*y2")
    assert q_poly(1, 3) == Q.parse("4*x1^2*x2*y2^3 + 6*x1*y1*x2^2*y2^2 + 4*y1^2*x2^3*y2")
    assert q_poly(2, 3) == Q.parse("2*x1*y1*x2*y2")


@pytest.mark.parametrize("b,c", [(b, c) for b in range(1, 7) for c in range(b, 7)])
def test_q_matches_closed_form_oracle(b, c):
    assert q_poly(b, c).terms == from_sympy(q_reference(b, c), catalog.Q_RING)


def test_q_symmetry():
    Q = catalog.Q_RING
    swap = {"x1": Q.gen("y1"), "y1": Q.gen("x1"), "x2": Q.gen("y2"), "y2": Q.gen("x2")}
    for b in range(1, 6):
        for c in range(b, 8):
            assert q_poly(b, c).substitute(swap, Q) == q_poly(b, c)


@pytest.mark.parametrize("b,c", [(0, 1), (2, 1), (-1, 3)])
def test_q_rejects_bad_parameters(b, c):
    with pytest.raises(ConstraintError):
        q_poly(b, c)


# -- named monoids -------------------------------------------------------------------

def test_rank0_and_toric():
    A = make_rank0(1)
    assert comps(A) == ["x1 + y1"] and A.zero is None and A.unit == (0,)
    assert comps(make_rank0(3)) == ["x1 + y1", "x2 + y2", "x3 + y3"]
    M3 = make_toric(3)
    assert comps(M3) == ["x1*y1", "x2*y2", "x3*y3"]
    assert M3.zero == (0, 0, 0) and M3.family.rank == 3


def test_corank1_examples():
    S = make_corank1(2, (3,))
    assert S.mu.components == parse(2, ["x1*y1", "x1^3*y2 + y1^3*x2"])
    assert S.family.tag == "A2_MbA"
    T = make_corank1(3, (1, 2))
    assert T.components[2] == Ring.blocks(3).parse("x1*x2^2*y3 + y1*y2^2*x3")
    assert T.family.tag == "A3_MMbcA" and T.unit == (1, 1, 0)
    # b = 0: a direct product of copies of M with A, no zero element
    P = make_corank1(3, (0, 0))
    assert comps(P) == ["x1*y1", "x2*y2", "x3 + y3"] and P.zero is None


@pytest.mark.parametrize("n,b,msg", [(3, (2, 1), "sorted"), (3, (-1, 0), "non-negative"),
                                     (3, (1,), "entries"), (1, (), "n >= 2")])
def test_corank1_constraints(n, b, msg):
    with pytest.raises(ConstraintError, match=msg):
        make_corank1(n, b)


def test_a3_examples():
    S = make_A3("MbAbcA", 1, 1)
    assert S.mu.components == parse(3, ["x1*y1", "x1*y2 + y1*x2", "x1*y3 + 2*x2*y2 + y1*x3"])
    T = make_A3("MbAcA", 1, 2)
    assert T.mu.components == parse(3, ["x1*y1", "x1*y2 + y1*x2", "x1^2*y3 + y1^2*x3"])
    U = make_A3("A3_MbAbcA", 1, 3)
    assert U.components[2] == Ring.blocks(3).parse(
        "x1^3*y3 + 4*x1^2*x2*y2^3 + 6*x1*y1*x2^2*y2^2 + 4*y1^2*x2^3*y2 + y1^3*x3")
    assert (S.unit, S.zero) == ((1, 0, 0), (0, 0, 0))
    assert make_A3("MbAcA", 0, 2).zero is None


@pytest.mark.parametrize("tag,b,c", [("MbAcA", 2, 1), ("MbAcA", -1, 1), ("MbAbcA", 0, 1),
                                     ("MbAbcA", 3, 2), ("MxA", 1, 1)])
def test_a3_constraints(tag, b, c):
    with pytest.raises(ConstraintError):
        make_A3(tag, b, c)


def test_hirzebruch_examples():
    N = make_hirzebruch(1, True)
    assert N.mu.components == parse(4, ["x1*y1", "x2*y2", "x1*y3 + y1*x3", "x1*x2*y4 + y1*y2*x4"])
    NN = make_hirzebruch(1, False)
    assert NN.components[3] == Ring.blocks(4).parse("x1*x2*y4 + y1*y2*x4 + x2*y2*x3*y3")
    assert N.unit == (1, 1, 0, 0)
    assert all(verify_all(N)) and all(verify_all(NN))
    with pytest.raises(ConstraintError):
        make_hirzebruch(0, False)
    with pytest.raises(ConstraintError):
        make_hirzebruch(-1)


# -- bilinear monoids --------------------------------------------------------------

def test_truncated_constants():
    A = make_truncated_poly_algebra(3)
    for k, i, j in itertools.product(range(3), repeat=3):
        assert A.gamma[k][i][j] == (1 if i + j == k else 0)


def test_bilinear_examples():
    assert make_bilinear(make_truncated_poly_algebra(3)).mu.components == parse(
        3, ["x1*y1", "x1*y2 + x2*y1", "x1*y3 + x2*y2 + x3*y1"])
    assert make_bilinear_preset("k3").mu == make_toric(3).mu
    assert make_bilinear_preset("kt1t2").mu == make_A3("MbAcA", 1, 1).mu
    assert make_bilinear_preset("k-kt2").mu.components == parse(
        3, ["x1*y1", "x2*y2", "x2*y3 + x3*y2"])
    assert make_truncated(1).mu == make_toric(1).mu


def test_truncated_two_is_corank1():
    assert make_bilinear(make_truncated_poly_algebra(2)).mu == make_corank1(2, (1,)).mu


def test_bilinear_rejects_bad_algebras():
    # k[t]/(t^2 - t) via products e_i*e_j, a valid algebra
    ok = AlgebraStructureConstants.from_products(
        2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 1): {1: 1}}, [1, 0])
    bad = AlgebraStructureConstants.build(2, [[[0, 1], [1, 0]], [[1, 0], [0, 0]]], [0, 1])
    with pytest.raises(AlgebraError) as exc:
        make_bilinear(bad)
    assert exc.value.witness is not None
    noncomm = AlgebraStructureConstants.build(2, [[[1, 0], [0, 0]], [[0, 1], [0, 0]]], [1, 0])
    with pytest.raises(AlgebraError, match="commutative"):
        make_bilinear(noncomm)
    nounit = AlgebraStructureConstants.build(1, [[[1]]], [2])
    with pytest.raises(AlgebraError, match="unit"):
        make_bilinear(nounit)
    assert all(verify_all(make_bilinear(ok)))


def test_json_round_trips():
    fd = FamilyDescriptor("A3_MbAbcA", (1, 3), 1, 2, (0,))
    assert FamilyDescriptor.from_json(fd.to_json()) == fd
    A = make_truncated_poly_algebra(4)
    assert AlgebraStructureConstants.from_json(A.to_json()) == A
    with pytest.raises(ValueError):
        FamilyDescriptor("nonsense", ())


# -- actions ---------------------------------------------------------------------

def test_demazure_action_display():
    g = catalog.demazure_action(3, (1, 2))
    R = g.action.ring
    expected = tuple(R.parse(s) for s in ("t1*x1", "t2*x2", "t1*t2^2*x3 + t1*t2^2*a*x1*x2^2"))
    assert g.action.components == expected


def test_a3_action_display():
    # alpha = d + 1 branch for b = 1, c = 2 (d = 2, e = 0):
    # x3 -> t^2 [x3 + a2 x1^2 + 3 a1 x2^2 + 3 a1^2 x1 x2 + a1^3 x1^2]
    act = catalog.a3_group_action(1, 2, 3).action
    R = act.ring
    want = R.parse("t^2*(x3 + a2*x1^2 + 3*a1*x2^2 + 3*a1^2*x1*x2 + a1^3*x1^2)")
    assert act.components[2] == want
    assert act.components[1] == R.parse("t*(x2 + a1*x1)")


@pytest.mark.parametrize("d", [1, 2, 3])
def test_hirzebruch_lifted_action_display(d):
    act = catalog.hirzebruch_unipotent_action(d, False)
    R = act.ring
    want = R.parse(f"x4 + (a2 + 1/2*a1^2)*x1^{d}*x2 + a1*x1^{d - 1}*x2*x3")
    assert act.components == (R.gen("x1"), R.gen("x2"), R.parse("x3 + a1*x1"), want)
    norm = catalog.hirzebruch_unipotent_action(d, True)
    assert norm.components[3] == norm.ring.parse(f"x4 + a2*x1^{d}*x2")


def test_hirzebruch_monoids_from_actions():
    for d in range(4):
        for normalized in (True, False):
            if d == 0 and not normalized:
                continue
            g = catalog.hirzebruch_group_action(d, normalized)
            S = monoid_from_action(g.action, g.base, g.inversion)
            assert S.mu == make_hirzebruch(d, normalized).mu


def test_catalog_matrix_covers_every_tag():
    tags = {S.family.tag for S in catalog.catalog_matrix(4, 2)}
    assert tags == set(catalog.TAGS)
