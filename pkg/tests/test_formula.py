import random

import pytest
from hypothesis import given, strategies as st

from gen import random_formula, st_formula
from provn.formula import (
    DELTA0, All, And, BAll, BEx, Eq, Ex, Imp, Lit, Not, Or, Pi, Sigma, Succ, Truth, Var, Zero,
    alpha_equal, canonical, classify, free_vars, in_class, nnf, numeral, numeral_value,
    parse_class, prenex, substitute,
)
from provn.semantics import evaluate
from provn.syntax import FormulaSyntaxError, parse_formula, parse_term, show, show_term


@given(st_formula())
def test_show_parse_roundtrip(f):
    assert parse_formula(show(f)) == f


@pytest.mark.parametrize("text", [
    "A x. x = 0 -> E y. y' = x",
    "(A x. x = 0) -> E y. y' = x",
    "~(x = 0 & y = 1) | z = 2",
    "E z<x + 1. x * z = exp(y)",
    "Prf(#12, p, #31)",
    "True[2](x) & @prec(x, y)",
    "x = sub(#5, #0, y)",
])
def test_text_is_stable(text):
    assert show(parse_formula(text)) == text


def test_small_hex_literals_print_decimal():
    assert show(parse_formula("x = #0x1f")) == "x = #31"


def test_implication_associates_right():
    a, b, c = (parse_formula(f"x = {n}") for n in range(3))
    assert parse_formula("x = 0 -> x = 1 -> x = 2") == Imp(a, Imp(b, c))


def test_numerals():
    assert parse_term("3") == numeral(3) == Succ(Succ(Succ(Zero())))
    assert numeral_value(numeral(17)) == 17
    assert show_term(parse_term("x''")) == "x''"


@pytest.mark.parametrize("text, pos", [("x = ", 4), ("A 3. x = 0", 2), ("x = 0 &", 7), ("x $ 0", 2)])
def test_syntax_errors_name_position(text, pos):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


def test_big_literals_print_in_hex():
    f = Eq(Var(0), Lit(1 << 9000))
    assert show(f).startswith("x = #0x1")
    assert parse_formula(show(f)) == f


def test_substitution_avoids_capture():
    f = parse_formula("E y. x = y'")
    g = substitute(f, 0, Var(1))
    assert isinstance(g, Ex) and g.var != 1
    assert free_vars(g) == {1}
    assert alpha_equal(g, parse_formula("E z. y = z'"))


def test_substitution_leaves_bound_occurrences():
    f = parse_formula("A x. x = 0")
    assert substitute(f, 0, numeral(3)) == f
    b = parse_formula("E x<y. x = y")  # the bound is outside the binder
    assert substitute(b, 1, numeral(2)) == BEx(0, numeral(2), parse_formula("x = 2"))


@given(st_formula(4), st.integers(0, 3), st.integers(0, 5))
def test_substitution_agrees_with_environment(f, v, n):
    env = {i: (i * 7 + 3) % 5 for i in range(4)}
    lhs = evaluate(substitute(f, v, numeral(n)), env, fuel=3000, qbound=6)
    rhs = evaluate(f, {**env, v: n}, fuel=3000, qbound=6)
    if lhs.exact and rhs.exact:
        assert lhs == rhs


@given(st_formula())
def test_canonical_is_alpha_invariant(f):
    shifted = f
    for v in sorted(free_vars(f)):
        shifted = substitute(shifted, v, Var(v))
    assert canonical(f) == canonical(shifted)
    assert alpha_equal(f, canonical(f))


def test_alpha_equal_distinguishes_free_variables():
    assert alpha_equal(parse_formula("A x. x = y"), parse_formula("A z. z = y"))
    assert not alpha_equal(parse_formula("A x. x = y"), parse_formula("A x. x = z"))


def test_classification_basics():
    assert classify(parse_formula("E x<y. x = 0")) == DELTA0
    assert classify(parse_formula("E x. x = 0")) == Sigma(1)
    assert classify(parse_formula("A x. x = 0")) == Pi(1)
    assert classify(parse_formula("A x. E y. x = y")) == Pi(2)
    assert classify(parse_formula("~A x. E y. x = y")) == Sigma(2)
    assert classify(parse_formula("(E x. x = 0) -> y = 0")) == Pi(1)
    assert classify(Truth(3, Var(0))) == Pi(3)
    assert in_class(parse_formula("E x. x = 0"), Sigma(2))
    assert in_class(parse_formula("E x. x = 0"), Pi(2))
    assert not in_class(parse_formula("E x. x = 0"), Pi(1))


def test_parse_class():
    assert parse_class("Sigma2") == Sigma(2) and parse_class("Pi_1") == Pi(1)
    assert parse_class("Delta0") == DELTA0
    with pytest.raises(ValueError):
        parse_class("Sigma")


COMPOUND = (Not, And, Or, Imp, All, Ex, BAll, BEx)


def _only_atoms_negated(f):
    if isinstance(f, Imp):
        return False
    if isinstance(f, Not):
        return not isinstance(f.body, COMPOUND)
    return all(_only_atoms_negated(getattr(f, k)) for k in ("left", "right", "body")
               if isinstance(getattr(f, k, None), COMPOUND))


@given(st_formula())
def test_nnf_shape_and_class(f):
    g = nnf(f)
    assert _only_atoms_negated(g)
    assert free_vars(g) == free_vars(f)
    assert classify(g) == classify(f)


@given(st_formula())
def test_prenex_pulls_unbounded_quantifiers(f):
    # unbounded quantifiers under a bounded one stay put: pulling them out is not sound
    g = prenex(f)
    while isinstance(g, (All, Ex)):
        g = g.body
    stack = [g]
    while stack:
        h = stack.pop()
        assert not isinstance(h, (All, Ex))
        if isinstance(h, COMPOUND) and not isinstance(h, (BAll, BEx)):
            stack.extend(getattr(h, k) for k in ("left", "right", "body") if hasattr(h, k))
    assert free_vars(prenex(f)) == free_vars(f)


def test_bounded_quantifier_rejects_own_variable():
    with pytest.raises(ValueError):
        BAll(0, Var(0), Eq(Var(0), Zero()))


def test_random_corpus_has_all_connectives():
    rng = random.Random(0)
    kinds = {type(random_formula(rng, 6)) for _ in range(300)}
    assert {Eq, Not, And, Or, Imp, All, Ex, BAll, BEx} <= kinds
