import random

import pytest
from hypothesis import given, strategies as st

from provn.formula import (
    Add, And, BAll, BEx, Eq, Exp, Fn, Imp, Lit, Mul, Not, Or, Prf, Succ, Truth, Var, Zero, numeral,
)
from provn.godel import encode
from provn.ordinal import OMEGA, ordinal_code, parse_ordinal
from provn.proofs import ProofObject, line
from provn.semantics import (
    FALSE, TRUE, UNKNOWN_BOUND, UNKNOWN_FUEL, EvaluationError, Evaluator, Verdict, evaluate, sub,
)
from provn.syntax import parse_formula as P


# brute-force reference evaluator for bounded formulas over small numbers

def ref_term(t, env):
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Var):
        return env[t.index]
    if isinstance(t, Succ):
        return ref_term(t.arg, env) + 1
    if isinstance(t, Add):
        return ref_term(t.left, env) + ref_term(t.right, env)
    if isinstance(t, Mul):
        return ref_term(t.left, env) * ref_term(t.right, env)
    if isinstance(t, Exp):
        return 2 ** ref_term(t.arg, env)
    raise TypeError(t)


def ref_formula(f, env):
    if isinstance(f, Eq):
        return ref_term(f.left, env) == ref_term(f.right, env)
    if isinstance(f, Not):
        return not ref_formula(f.body, env)
    if isinstance(f, And):
        return ref_formula(f.left, env) and ref_formula(f.right, env)
    if isinstance(f, Or):
        return ref_formula(f.left, env) or ref_formula(f.right, env)
    if isinstance(f, Imp):
        return (not ref_formula(f.left, env)) or ref_formula(f.right, env)
    rng = range(ref_term(f.bound, env))
    test = (ref_formula(f.body, {**env, f.var: n}) for n in rng)
    return all(test) if isinstance(f, BAll) else any(test)


def small_term(rng, depth):
    if depth == 0 or rng.random() < 0.4:
        return rng.choice([Zero(), Var(rng.randrange(3)), numeral(rng.randrange(4))])
    k = rng.randrange(4)
    if k == 0:
        return Succ(small_term(rng, depth - 1))
    if k == 1:
        return Add(small_term(rng, depth - 1), small_term(rng, depth - 1))
    if k == 2:
        return Mul(small_term(rng, depth - 1), small_term(rng, depth - 1))
    return Exp(rng.choice([Zero(), Var(rng.randrange(3)), numeral(rng.randrange(4))]))


def bounded_formula(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return Eq(small_term(rng, 2), small_term(rng, 2))
    k = rng.randrange(6)
    if k == 0:
        return Not(bounded_formula(rng, depth - 1))
    if k <= 3:
        return (And, Or, Imp)[k - 1](bounded_formula(rng, depth - 1), bounded_formula(rng, depth - 1))
    v = rng.randrange(3)
    bound = numeral(rng.randrange(6)) if rng.random() < 0.5 else Var((v + 1) % 3)
    return (BAll, BEx)[k - 4](v, bound, bounded_formula(rng, depth - 1))


@given(st.integers(0, 2 ** 32), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_bounded_formulas_match_reference(seed, values):
    f = bounded_formula(random.Random(seed), 4)
    env = dict(enumerate(values))
    assert evaluate(f, env, fuel=10 ** 6) == (TRUE if ref_formula(f, env) else FALSE)


def test_verdict_text():
    assert str(TRUE) == "True (exact)"
    assert str(UNKNOWN_FUEL) == "Unknown (fuel)"
    assert str(UNKNOWN_BOUND) == "Unknown (quantifier-bound)"
    assert not UNKNOWN_BOUND.exact and FALSE.exact


def test_arithmetic():
    assert evaluate(P("exp(3) = 8"), fuel=1000) == TRUE
    assert evaluate(P("2 * 3 + 1 = 7")) == TRUE
    assert evaluate(P("exp(10) = 1023")) == FALSE


def test_fuel_exhaustion_is_unknown():
    assert evaluate(P("A x<1000. A y<1000. x * y = y * x"), fuel=500) == UNKNOWN_FUEL
    assert evaluate(P("exp(exp(exp(5))) = 0")) == UNKNOWN_FUEL


def test_unbounded_quantifiers():
    assert evaluate(P("E x. x * x = 49")) == TRUE
    assert evaluate(P("A x. x * 0 = 0")) == UNKNOWN_BOUND
    assert evaluate(P("A x. x = 3")) == FALSE
    assert evaluate(P("E y. y * y = 2")) == UNKNOWN_BOUND
    assert evaluate(P("E x. x = 1000 * 1000"), qbound=5) == TRUE  # narrowed to one candidate


def test_witnesses_extend_search():
    f = P("E x. x * x = #1000000")
    assert evaluate(f, qbound=10) == UNKNOWN_BOUND
    assert evaluate(f, qbound=10, witnesses=[1000]) == TRUE


def test_bad_environment():
    with pytest.raises(EvaluationError):
        evaluate(P("x = 0"))
    with pytest.raises(EvaluationError):
        evaluate(P("x = 0"), {0: -1})
    with pytest.raises(EvaluationError):
        evaluate(P("@nosuch(0)"))


def test_sub_function():
    f = P("x = y")
    code = encode(f)
    assert sub(code, 0, 5) == encode(P("#5 = y"))
    assert sub(12345, 0, 5) == 12345  # not a code: unchanged
    assert evaluate(Eq(Fn("sub", (Lit(code), Lit(1), numeral(2))), Lit(encode(P("x = #2"))))) == TRUE


def test_sub_inversion_narrows_search():
    code = encode(P("x = y"))
    target = sub(code, 1, 777)
    ev = Evaluator()
    assert ev.invert(Fn("sub", (Lit(code), Lit(1), Var(2))), 2, target, {}) == {777}
    # far beyond the quantifier bound, yet exact
    assert evaluate(P(f"E z. sub(#{code}, #1, z) = #{target}"), qbound=5) == TRUE


def test_prec_relation():
    w, w2 = ordinal_code(OMEGA), ordinal_code(parse_ordinal("w^2"))
    assert evaluate(P(f"@prec(#{w}, #{w2})")) == TRUE
    assert evaluate(P(f"@prec(#{w2}, #{w})")) == FALSE
    assert evaluate(P(f"@prec(#{w}, #{w})")) == FALSE


def test_truth_predicate():
    zero = encode(P("0 = 0"))
    assert evaluate(Truth(1, Lit(zero))) == TRUE
    assert evaluate(Truth(1, Lit(encode(P("0 = 1"))))) == FALSE
    # not a Pi1 sentence: rejected
    assert evaluate(Truth(1, Lit(encode(P("E x. A y. x = y"))))) == FALSE
    assert evaluate(Truth(1, Lit(encode(P("A x. x = x"))))) == UNKNOWN_BOUND


def test_provability_atom():
    nu = P("x = #0")  # numerates no useful axiom
    target = P("0 = 0")
    proof = ProofObject((line(target, "logic", schema="EQ1"),))
    atom = Prf(Lit(encode(nu)), Lit(proof.code()), Lit(encode(target)))
    assert evaluate(atom) == TRUE
    bad = Prf(Lit(encode(nu)), Lit(proof.code()), Lit(encode(P("0 = 1"))))
    assert evaluate(bad) == FALSE
    assert evaluate(Prf(Lit(encode(nu)), Lit(7), Lit(encode(target)))) == FALSE


def test_verdict_is_value_type():
    assert Verdict(True) == TRUE
    assert hash(Verdict(None, "fuel")) == hash(UNKNOWN_FUEL)
