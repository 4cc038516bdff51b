from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qworlds.fixtures import boolean, fixture, mo, product
from qworlds.qreals import (F, G, H, NotRegular, RealLiteralError, StepReal, as_lset, check_R,
                            chains, grid_for, member_truth, parse_real, parse_reals,
                            real_truth_eq, regularise, spectral_families, star_real)
from qworlds.qsets import AlgebraMismatch, Evaluator, Universes

_cache: dict[str, Universes] = {}


def U_of(name: str) -> Universes:
    if name not in _cache:
        _cache[name] = Universes.over(fixture(name))
    return _cache[name]


@pytest.mark.parametrize("name,count", [("boolean2", 3), ("mo2", 5), ("mo3", 7)])
def test_family_counts(name, count):
    # [DERIVED] one 1-jump family plus one 2-jump family per element strictly between
    # bottom and top
    assert len(spectral_families(U_of(name).L, 2)) == count


def test_chains_are_strict():
    L = fixture("boolean3")
    for c in chains(L, 3):
        assert all(L.leq(x, y) and x != y for x, y in zip(c, c[1:]))
    # [DERIVED] maximal chains in 2^3 are the 3! orderings of the atoms
    assert len(chains(L, 3)) == 6


def test_make_canonicalizes():
    A = U_of("mo2").L
    a = A.lattice.index("a")
    u = StepReal.make(A, [0, 1, 2], [A.bottom, a, a, A.top])
    assert u.breakpoints == (0, 2) and u.plateaus == (A.bottom, a, A.top)
    with pytest.raises(ValueError):
        StepReal(A, (Fraction(1), Fraction(0)), (0, 0, 0))


def test_left_continuity():
    A = U_of("mo2").L
    a = A.lattice.index("a")
    u = StepReal.make(A, [0, 1], [A.bottom, a, A.top])
    assert member_truth(u, 0) == A.bottom
    assert member_truth(u, Fraction(1, 2)) == a
    assert member_truth(u, 1) == a
    assert member_truth(u, Fraction(11, 10)) == A.top


@pytest.mark.parametrize("name", ["boolean2", "mo2", "mo3", "mo2xbool1"])
def test_G_after_H(name):
    U = U_of(name)
    for X in spectral_families(U.L, 2):
        assert check_R(X)["ok"]
        h = H(X, U.Sub)
        assert check_R(h)["ok"] and h.is_regular()
        assert G(h, U.L) == X


def test_H_after_G_on_regular_reals():
    U = U_of("mo2")
    sigma = U.sigma
    subs = sigma.subobjects()
    regular = 0
    for S in subs:
        for T in subs:
            u = StepReal.make(U.Sub, [0, 1], [sigma.bottom, S, T])
            if not u.is_regular() or not check_R(u)["ok"]:
                with pytest.raises(NotRegular):
                    G(u, U.L)
                continue
            regular += 1
            assert H(G(u, U.L), U.Sub) == u
    # [DERIVED] the join of all plateaus must be top and (iii) at the last plateau then
    # forces T** = top, so T = top; S ranges over the six delta-images
    assert regular == 6


def test_check_R_failures():
    A = U_of("mo2").L
    L = A.lattice
    a, b = L.index("a"), L.index("b")
    nonmono = StepReal.make(A, [0, 1, 2], [L.bottom, a, b, L.top])
    assert ("iii", 2) in check_R(nonmono)["failures"]
    short = StepReal.make(A, [0], [L.bottom, a])
    assert any(f[0] == "i" for f in check_R(short)["failures"])
    assert not check_R(star_real(StepReal.classical(A, 0)))["ok"]


def test_F_and_regularise():
    U = U_of("mo2")
    X = spectral_families(U.L, 2)[1]
    h = H(X, U.Sub)
    assert [F(h, r) for r in X.sample_points()] == [X.value(r) for r in X.sample_points()]
    assert regularise(h) == h
    with pytest.raises(AlgebraMismatch):
        F(X, 0)


def test_classical_reals_equality():
    A = U_of("mo3").L
    for j in "SCR":
        assert real_truth_eq(StepReal.classical(A, 1), StepReal.classical(A, 1), j) == A.top
        assert real_truth_eq(StepReal.classical(A, 1), StepReal.classical(A, 2), j) == A.bottom


def test_literals():
    U = U_of("mo2xbool1")
    name, u = parse_real("real x = [(-1/2, (a,0)), (3, (1,1))]", U.L)
    L = U.lattice
    assert name == "x" and u.breakpoints == (Fraction(-1, 2), 3)
    assert u.plateaus == (L.bottom, L.index("(a,0)"), L.top)
    assert parse_real(u.literal("x"), U.L)[1] == u
    text = "# two reals\nreal p = [(0, (1,1))]\n\nreal q = [(0, (b,1)), (1, (1,1))]\n"
    reals = parse_reals(text, U.L)
    assert list(reals) == ["p", "q"]


@pytest.mark.parametrize("text", ["real x = [(0, a)]", "real x = [(1, a), (0, 1)]",
                                  "real x = [(zz, 1)]", "real x = [(0, q)]", "x = [(0, 1)]",
                                  "real x = [(0 1)]", "real x = [(0, 1]"])
def test_bad_literals(text):
    with pytest.raises(RealLiteralError):
        parse_real(text, U_of("mo2").L)


def test_duplicate_names():
    with pytest.raises(RealLiteralError):
        parse_reals("real x = [(0, 1)]\nreal x = [(1, 1)]", U_of("mo2").L)


def test_mismatched_universes():
    U, V = U_of("mo2"), Universes.over(mo(2))
    X = StepReal.classical(U.L, 0)
    with pytest.raises(AlgebraMismatch):
        H(X, V.Sub)
    with pytest.raises(AlgebraMismatch):
        real_truth_eq(X, StepReal.classical(V.L, 0))


@st.composite
def step_reals(draw, algebra_name, side):
    U = U_of(algebra_name)
    k = draw(st.integers(0, 3))
    bps = sorted(draw(st.sets(st.fractions(-5, 5, max_denominator=4), min_size=k, max_size=k)))
    if side == "L":
        A, pool = U.L, list(U.lattice)
    else:
        # arbitrary subobjects, not only regular ones, and no monotonicity
        A, pool = U.Sub, U.sigma.subobjects()
    vals = [draw(st.sampled_from(pool)) for _ in range(len(bps) + 1)]
    return StepReal.make(A, bps, vals)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_equality_matches_grid_formula(data):
    # the generic evaluator on grid-relativized sets sees the same meet of iffs
    side = data.draw(st.sampled_from(["L", "Sub"]))
    u = data.draw(step_reals("mo2", side))
    v = data.draw(step_reals("mo2", side))
    grid = grid_for(u, v)
    for j in "SCR":
        ev = Evaluator(u.algebra, j)
        assert real_truth_eq(u, v, j) == ev.eq(as_lset(u, grid), as_lset(v, grid))


def test_product_fixture_reals_round_trip():
    L = product(mo(2), boolean(1))
    U = Universes.over(L)
    for X in spectral_families(U.L, 2):
        assert G(H(X, U.Sub), U.L) == X
