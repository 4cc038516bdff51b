import json

import pytest
from hypothesis import given, settings, strategies as st

from qworlds.fixtures import FIXTURES, boolean, fixture, mo, product
from qworlds.oml import (IMPLICATIONS, NotALattice, NotOrtho, NotOrthomodular,
                         implication_criteria_check, load_oml, verify_oml)

import oracles

SMALL = ["boolean1", "boolean2", "boolean3", "mo2", "mo3", "mo2xbool1"]


def benzene():
    # the hexagon O6: an ortholattice that is not orthomodular
    return {"elements": ["0", "a", "b", "b'", "a'", "1"],
            "covers": [["0", "a"], ["a", "b"], ["b", "1"], ["0", "b'"], ["b'", "a'"], ["a'", "1"]],
            "ortho": {"a": "a'", "b": "b'", "0": "1"}}


@pytest.mark.parametrize("name,size", [("boolean1", 2), ("boolean2", 4), ("boolean3", 8),
                                       ("mo2", 6), ("mo3", 8), ("mo2xbool1", 12),
                                       ("mo2xbool2", 24)])
def test_fixture_sizes(name, size):
    assert fixture(name).n == size


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixture("mo7x")


def test_mo2_tables():
    L = mo(2)
    a, a_, b = L.index("a"), L.index("a'"), L.index("b")
    assert L.meet(a, b) == L.bottom and L.join(a, b) == L.top
    assert L.ortho(a) == a_
    assert sorted(L.name(x) for x in L.atoms) == ["a", "a'", "b", "b'"]


def test_implications_on_mo2():
    # [DERIVED] by hand from a' v (a ^ b) and friends, with a ^ b = a' ^ b = 0
    L = mo(2)
    a, b = L.index("a"), L.index("b")
    assert L.name(L.sasaki(a, b)) == "a'"
    assert L.name(L.contrapositive(a, b)) == "b"
    assert L.relevance(a, b) == L.bottom
    assert L.implies("S", a, b) == L.sasaki(a, b)
    with pytest.raises(ValueError):
        L.implies("Q", a, b)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("j", IMPLICATIONS)
def test_quantum_implications_meet_criteria(name, j):
    assert implication_criteria_check(fixture(name), j)["ok"]


def test_material_conditional_fails_on_mo2():
    L = mo(2)
    res = implication_criteria_check(L, lambda x, y: L.join(L.ortho(x), y))
    assert not res["ok"] and res["failures"]


@pytest.mark.parametrize("name", SMALL)
def test_commutes_matches_definition(name):
    L = fixture(name)
    for a in L:
        for b in L:
            assert L.commutes(a, b) == oracles.commutes(L, a, b)


def test_center_and_irreducibility():
    assert len(fixture("mo2xbool1").center) == 4
    assert fixture("mo2").is_irreducible() and fixture("mo3").is_irreducible()
    assert not fixture("mo2xbool2").is_irreducible()
    assert fixture("boolean3").is_boolean() and not fixture("mo2").is_boolean()
    assert len(fixture("mo3").blocks) == 3


def test_amalg_of_commuting_family_is_top():
    L = fixture("boolean3")
    assert L.amalg(list(L)) == L.top


def test_amalg_of_incompatible_pair_in_mo2():
    # [DERIVED] only 0 and 1 commute with both a and b, so the amalgam is the join
    # of the commutator words; a ^ b, a ^ b', ... are all 0 in MO2
    L = mo(2)
    assert L.amalg([L.index("a"), L.index("b")]) == L.bottom


def test_verify_rejects_non_lattice():
    with pytest.raises(NotALattice) as info:
        verify_oml({"elements": ["0", "a", "1"], "covers": [], "ortho": {"0": "1", "a": "a"}})
    assert info.value.witness


def test_verify_rejects_bad_ortho():
    chain = {"elements": ["0", "x", "1"], "covers": [["0", "x"], ["x", "1"]],
             "ortho": {"0": "1", "x": "x"}}
    with pytest.raises(NotOrtho):
        verify_oml(chain)


def test_verify_rejects_benzene():
    with pytest.raises(NotOrthomodular) as info:
        verify_oml(benzene())
    assert len(info.value.witness) == 2


def test_verify_rejects_empty_and_duplicates():
    with pytest.raises(NotALattice):
        verify_oml({"elements": []})
    with pytest.raises(NotALattice):
        verify_oml({"elements": ["0", "0"], "covers": [], "ortho": {}})


def test_round_trip_through_file(tmp_path):
    L = fixture("mo2xbool1")
    path = tmp_path / "l.json"
    path.write_text(json.dumps(L.to_dict()))
    M = load_oml(path)
    assert M.names == L.names
    assert all(M.meet(a, b) == L.meet(a, b) and M.ortho(a) == L.ortho(a) for a in L for b in L)


def test_empty_file(tmp_path):
    path = tmp_path / "e.json"
    path.write_text("  \n")
    with pytest.raises(ValueError, match="empty"):
        load_oml(path)


def test_to_dot_has_every_cover():
    L = mo(2)
    dot = L.to_dot()
    assert dot.startswith("graph") and dot.count("--") == len(L.covers) + 3
    assert "dashed" in dot


def test_product_is_componentwise():
    P = product(mo(2), boolean(1))
    x, y = P.index("(a,1)"), P.index("(b,0)")
    assert P.name(P.join(x, y)) == "(1,1)"
    assert P.name(P.ortho(x)) == "(a',0)"


lattices = st.sampled_from(SMALL + ["mo2xbool2"]).map(fixture)


@st.composite
def triples(draw):
    L = draw(lattices)
    pick = st.integers(0, L.n - 1)
    return L, draw(pick), draw(pick), draw(pick)


@settings(max_examples=300, deadline=None)
@given(triples())
def test_lattice_laws(t):
    L, a, b, c = t
    o = L.ortho
    assert o(o(a)) == a
    assert o(L.meet(a, b)) == L.join(o(a), o(b))
    assert L.meet(a, L.join(a, b)) == a
    if L.leq(a, b):
        assert L.join(a, L.meet(b, o(a))) == b
        assert L.leq(o(b), o(a))
    assert L.meet(a, L.meet(b, c)) == L.meet(L.meet(a, b), c)


@settings(max_examples=300, deadline=None)
@given(triples())
def test_sasaki_residuation(t):
    # the Sasaki projection a ^ (a' v c) is left adjoint to a ->S -
    L, a, b, c = t
    proj = L.meet(a, L.join(L.ortho(a), c))
    assert L.leq(proj, b) == L.leq(c, L.sasaki(a, b))


@settings(max_examples=200, deadline=None)
@given(triples())
def test_arrow_top_iff_below(t):
    L, a, b, _ = t
    for j in IMPLICATIONS:
        assert (L.implies(j, a, b) == L.top) == L.leq(a, b)


def test_all_fixtures_listed():
    assert set(FIXTURES) >= {"boolean2", "boolean3", "mo2", "mo3", "mo2xbool2"}
