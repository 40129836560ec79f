import dataclasses
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from affmonoid.catalog import (catalog_matrix, make_A3, make_bilinear_preset, make_corank1,
                               make_hirzebruch, make_rank0, make_toric)
from affmonoid.monoids import multiply, power
from affmonoid.structure import (MissingMetadata, WrongFamily, check_idempotent_bound,
                                 dichotomy_rank1, grid, group_like_power, idempotents,
                                 is_group_like, is_idempotent, is_invertible, is_nilpotent)

RANK1_WITH_ZERO = [make_A3(tag, b, c) for tag in ("MbAcA", "MbAbcA")
                   for b in range(1, 4) for c in range(b, 4)]


def strip(S):
    return dataclasses.replace(S, family=None)


# -- idempotents ----------------------------------------------------------------------

def test_idempotent_examples():
    assert len(idempotents(make_toric(3))) == 8
    E = idempotents(make_A3("MbAbcA", 1, 1))
    assert E.points == ((0, 0, 0), (1, 0, 0)) and E.complete
    for n in range(2, 5):
        for b in itertools.product(range(1, 3), repeat=n - 1):
            pts = idempotents(make_corank1(n, tuple(sorted(b)))).points
            assert set(pts) == {e + (0,) for e in itertools.product((0, 1), repeat=n - 1)}


def test_idempotents_without_metadata_are_incomplete():
    E = idempotents(strip(make_toric(2)))
    assert len(E) == 4 and not E.complete


def test_idempotent_set_is_exact_filter():
    for S in catalog_matrix(3, 3):
        E = set(idempotents(S).points)
        assert len(E) == len(idempotents(S).points)
        for e in itertools.product((0, 1), repeat=S.dim):
            assert (tuple(e) in E) == (multiply(S, e, e) == tuple(e))


def test_bound_examples():
    assert check_idempotent_bound(make_hirzebruch(1, True)).count == 4
    rep = check_idempotent_bound(make_A3("MbAcA", 1, 3))
    assert rep.count == 2 and rep.holds
    rep = check_idempotent_bound(make_toric(3))
    assert (rep.count, rep.lower_bound, rep.holds) == (8, 8, True)
    with pytest.raises(MissingMetadata):
        check_idempotent_bound(strip(make_toric(3)))


def test_bound_holds_across_catalog():
    for S in catalog_matrix(4, 5):
        rep = check_idempotent_bound(S)
        assert rep.holds, (S.family.label(), rep)


# -- invertibility and nilpotency ---------------------------------------------------------

def test_invertible_examples():
    S = make_A3("MbAcA", 1, 1)
    assert is_invertible(S, (2, 1, 1))
    assert not is_invertible(S, (0, 5, 7))
    assert all(is_invertible(make_rank0(2), p) for p in grid(2, 1))
    with pytest.raises(MissingMetadata):
        is_invertible(strip(S), (1, 0, 0))


def test_bilinear_invertibility_by_determinant():
    S = make_bilinear_preset("kt3")
    assert is_invertible(S, (1, 5, 7)) and not is_invertible(S, (0, 1, 1))


def test_nilpotent_examples():
    rep = is_nilpotent(make_A3("MbAcA", 1, 1), (0, 1, 1))
    assert rep.nilpotent and rep.k == 1
    S = make_A3("MbAbcA", 1, 1)
    assert multiply(S, (0, 1, 1), (0, 1, 1)) == (0, 0, 2)
    assert not is_nilpotent(make_toric(2), (0, 1)).nilpotent
    for x2, x3 in [(3, -7), (1, 0), (-2, 5)]:
        assert is_nilpotent(S, (0, x2, x3)).nilpotent
    with pytest.raises(ValueError):
        is_nilpotent(make_rank0(2), (0, 0))


# -- dichotomy and group-like powers --------------------------------------------------------

def test_dichotomy_examples():
    assert dichotomy_rank1(make_A3("MbAcA", 2, 3), grid(3, 1)).summary() == "holds at 27/27 points"
    assert dichotomy_rank1(make_A3("MbAbcA", 1, 1), grid(3, 1)).ok
    with pytest.raises(WrongFamily, match="wrong family"):
        dichotomy_rank1(make_toric(2), grid(2, 1))


@pytest.mark.parametrize("S", RANK1_WITH_ZERO, ids=lambda S: S.family.label())
def test_dichotomy_exhaustive(S):
    rep = dichotomy_rank1(S, grid(3, 2))
    assert rep.ok and rep.total == 125
    assert rep.max_index <= 2 ** S.dim


def test_group_like_examples():
    S = make_A3("MbAcA", 1, 1)
    m, q = group_like_power(S, (0, 1, 1))
    assert m == 2 and q == (0, 0, 0)
    assert group_like_power(S, (3, 1, 1))[0] == 1
    C = make_corank1(3, (1, 2))
    for p in grid(3, 2):
        m, q = group_like_power(C, p)
        assert m <= 2 and q == power(C, p, m)
        if is_invertible(C, p):
            assert m == 1


def test_group_like_needs_metadata():
    with pytest.raises(MissingMetadata):
        is_group_like(strip(make_toric(2)), (1, 0))


@settings(max_examples=60, deadline=None)
@given(idx=st.integers(0, 200), p=st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_group_like_power_bounded(idx, p):
    mats = catalog_matrix(4, 3)
    S = mats[idx % len(mats)]
    m, q = group_like_power(S, p[:S.dim])
    assert m <= 2 ** S.dim and q == power(S, p[:S.dim], m)
    # idempotents are group-like
    for e in idempotents(S).points:
        assert is_group_like(S, e)


@settings(max_examples=60, deadline=None)
@given(idx=st.integers(0, len(RANK1_WITH_ZERO) - 1),
       p=st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_dichotomy_property(idx, p):
    S = RANK1_WITH_ZERO[idx]
    assert is_invertible(S, p) != is_nilpotent(S, p).nilpotent
    assert is_idempotent(S, S.unit)
