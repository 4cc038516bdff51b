import random

import pytest
from hypothesis import given, settings, strategies as st

from qworlds.formulas import (And, Eq, ExistsIn, Forall, ForallIn, FormulaSyntaxError, Implies,
                              Mem, Not, Or, UnboundVariable, free_vars, is_delta0,
                              is_negation_free, parse, to_text)
from qworlds.qsets import random_formula


def test_atoms():
    assert parse("x = y") == Eq("x", "y")
    assert parse("x in y") == Mem("x", "y")


def test_precedence():
    # and binds tighter than or, or tighter than ->, and -> nests to the right
    assert parse("a = b or c = d and e = f") == Or(Eq("a", "b"), And(Eq("c", "d"), Eq("e", "f")))
    assert parse("a = a -> b = b -> c = c") == \
        Implies(Eq("a", "a"), Implies(Eq("b", "b"), Eq("c", "c")))
    assert parse("not a = b and c = d") == And(Not(Eq("a", "b")), Eq("c", "d"))


def test_quantifier_forms_agree():
    boxed = parse("(forall x in u) (exists y in v) (x = y)")
    bare = parse("forall x in u exists y in v x = y")
    assert boxed == bare == ForallIn("x", "u", ExistsIn("y", "v", Eq("x", "y")))


def test_unicode_synonyms():
    assert parse("∀x∈u ¬ x = x") == ForallIn("x", "u", Not(Eq("x", "x")))
    assert parse("x ∈ y ∧ y = y → x = x") == parse("x in y and y = y -> x = x")


def test_unbounded():
    phi = parse("(forall x) (x = x)")
    assert phi == Forall("x", Eq("x", "x"))
    assert not is_delta0(phi)


@pytest.mark.parametrize("text", ["", "x", "x = ", "(x = y", "x = y)", "forall in u x = x",
                                  "x = y and", "x % y", "in = x"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("x = y )")
    assert info.value.pos == 6


def test_free_variables():
    phi = parse("(forall x in u) (x in v or x = w)")
    assert free_vars(phi) == {"u", "v", "w"}
    with pytest.raises(UnboundVariable):
        parse("x = y", variables=["x"])
    assert parse("x = y", variables=["x", "y"]) == Eq("x", "y")


def test_negation_free():
    assert is_negation_free(parse("(exists x in u) (x = u or u in x)"))
    assert not is_negation_free(parse("u = v -> v = u"))
    assert not is_negation_free(parse("not u = u"))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans(), st.integers(0, 4))
def test_print_parse_round_trip(seed, negation_free, depth):
    phi = random_formula(random.Random(seed), ["u", "v", "w"], depth, negation_free)
    assert parse(to_text(phi)) == phi
    assert free_vars(phi) <= {"u", "v", "w"}
    assert is_delta0(phi)
    if negation_free:
        assert is_negation_free(phi)
