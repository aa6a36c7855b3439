import pytest
from hypothesis import given

from gen import st_theory
from provn.ordinal import EPSILON_ZERO, Ordinal, omega_tower
from provn.theory import (
    EA, EA_PLUS, PA, Atom, CInf, Cn, ConIter, IPiMinus, ISigma, ISigmaMinus, NConsis, Plus,
    RFNIter, RfnIter, Schema, TheorySyntaxError, TVar, depth, from_json, parse_theory,
    show_theory, to_json,
)

S = TVar("S")

CASES = [
    ("EA", EA),
    ("EA+", EA_PLUS),
    ("PA", PA),
    ("ISigma(2)", ISigma(2)),
    ("ISigma-(1)", ISigmaMinus(1)),
    ("IPi-(3)", IPiMinus(3)),
    ("C[1](S; PA)", Cn(1, S, PA)),
    ("Cinf(T)", CInf(TVar("T"))),
    ("S + Rfn(S)", Plus(S, Schema("Rfn", S, 0))),
    ("S + Rfn[2](S)", Plus(S, Schema("Rfn", S, 2))),
    ("EA + <1>Con(S)", Plus(EA, NConsis(1, S))),
    ("Rfn(S)@e0", RfnIter(0, None, S, EPSILON_ZERO)),
    ("Rfn[1](S)@w_2", RfnIter(1, None, S, omega_tower(2))),
    ("Rfn{Sigma 2}(EA)@w_1", RfnIter(0, 2, EA, omega_tower(1))),
    ("RFN{Sigma 1}(EA)@3", RFNIter(1, EA, Ordinal.of(3))),
    ("Con(EA)@w", ConIter(EA, omega_tower(0))),
    ("C[2](EA; C[1](S; ISigma(1)))", Cn(2, EA, Cn(1, S, ISigma(1)))),
]


@pytest.mark.parametrize("text, tree", CASES)
def test_parse_and_show(text, tree):
    assert parse_theory(text) == tree
    assert show_theory(tree) == text


def test_stages_with_sums_are_parenthesized():
    e = parse_theory("Con(EA)@(w+1)")
    assert show_theory(e) == "Con(EA)@(w+1)"


@given(st_theory())
def test_text_roundtrip(e):
    assert parse_theory(show_theory(e)) == e


@given(st_theory())
def test_json_roundtrip(e):
    assert from_json(to_json(e)) == e


@pytest.mark.parametrize("text, pos", [
    ("C[1](S PA)", 7),
    ("ISigma(0)", 7),
    ("Rfn(S)@", 7),
    ("EA + PA", 5),
    ("", 0),
])
def test_errors_name_position(text, pos):
    with pytest.raises(TheorySyntaxError) as info:
        parse_theory(text)
    assert f"position {pos}" in str(info.value)


def test_atoms_validate_indices():
    with pytest.raises(ValueError):
        ISigma(0)
    with pytest.raises(ValueError):
        Atom("ZF")


def test_depth():
    assert depth(EA) == 1
    assert depth(Cn(1, S, Cn(1, S, EA))) == 3
