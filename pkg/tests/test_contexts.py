import pytest

from qworlds.contexts import (ElementNotInContext, SizeLimitExceeded, all_homomorphisms,
                              enumerate_contexts, stone_points, stone_rep)
from qworlds.fixtures import boolean, fixture

import oracles

BRUTE = ["boolean1", "boolean2", "boolean3", "mo2", "mo3", "mo2xbool1"]


@pytest.mark.parametrize("name", BRUTE)
def test_contexts_match_subset_scan(name):
    L = fixture(name)
    got = sorted(sorted(B.carrier) for B in enumerate_contexts(L))
    want = sorted(sorted(c) for c in oracles.boolean_subalgebras(L))
    assert got == want


@pytest.mark.parametrize("n,bell", [(1, 1), (2, 2), (3, 5)])
def test_boolean_contexts_are_partitions(n, bell):
    # [DERIVED] subalgebras of 2^n correspond to partitions of n points: Bell numbers
    assert len(enumerate_contexts(boolean(n))) == bell


def test_mo_counts():
    # [DERIVED] the trivial context plus one four-element block per pair a, a'
    assert len(enumerate_contexts(fixture("mo2"))) == 3
    assert len(enumerate_contexts(fixture("mo3"))) == 4


def test_no_trivial_drops_exactly_one():
    L = fixture("mo3")
    assert len(enumerate_contexts(L, include_trivial=False)) == 3
    # a one-context poset keeps its only context
    assert len(enumerate_contexts(boolean(1), include_trivial=False)) == 1


def test_cap():
    with pytest.raises(SizeLimitExceeded):
        enumerate_contexts(fixture("mo3"), cap=2)


def test_poset_order_and_covers():
    P = enumerate_contexts(fixture("mo2"))
    assert [len(B.carrier) for B in P] == [2, 4, 4]
    assert P.covers == ((0, 1), (0, 2))
    assert [B.id for B in P.maximal()] == [1, 2]
    assert P.leq(0, 2) and not P.leq(1, 2)


@pytest.mark.parametrize("name", BRUTE + ["mo2xbool2"])
def test_restriction_sends_atom_to_atom_above(name):
    L = fixture(name)
    P = enumerate_contexts(L)
    for B in P:
        for j in P.below[B.id]:
            C = P[j]
            for i, t in enumerate(P.restriction(B.id, j)):
                assert L.leq(B.atoms[i], C.atoms[t])


@pytest.mark.parametrize("name", BRUTE)
def test_stone_points_are_all_homomorphisms(name):
    L = fixture(name)
    for B in enumerate_contexts(L):
        fast = sorted(sorted(h.items()) for h in stone_points(B))
        slow = sorted(sorted(h.items()) for h in all_homomorphisms(B))
        assert fast == slow


def test_stone_rep_and_masks():
    L = boolean(3)
    B = enumerate_contexts(L)[-1]
    x = L.index("p1+p3")
    assert stone_rep(B, x) == {L.index("p1"), L.index("p3")}
    assert B.element_of(B.mask_of(x)) == x
    assert B.dominate(L.index("p2")) == L.index("p2")


def test_mask_of_outside_context():
    L = fixture("mo2")
    B = enumerate_contexts(L)[1]
    with pytest.raises(ElementNotInContext):
        B.mask_of(L.index("b"))
    assert B.dominate(L.index("b")) == L.top


def test_dot_and_listing():
    P = enumerate_contexts(fixture("mo2"))
    assert P.to_dot().count("->") == 2
    assert P.listing().splitlines()[0] == "context 0: {0, 1}"
