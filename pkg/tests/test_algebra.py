import random

import pytest
from hypothesis import given

from gen import random_theory, st_theory
from provn.algebra import (
    RULE_ORDER, CannotNormalize, Derivation, NotDerivable, Unsupported, atom_le, check_derivation,
    conservation_equiv, normalize, pi1_ordinal, prove_inclusion, regularity, sigma_ordinal,
)
from provn.formula import Pi, Sigma
from provn.ordinal import EPSILON_ZERO, OMEGA, ZERO, Ordinal, omega_tower
from provn.theory import (
    EA, EA_PLUS, PA, CInf, Cn, ConIter, IPiMinus, ISigma, NConsis, Plus, RFNIter, RfnIter,
    Schema, TVar, parse_theory,
)

S, T = TVar("S"), TVar("T")


def rfn_plus(s, n=0):
    return Plus(s, Schema("Rfn", s, n))


def test_reference_normal_forms():
    assert normalize(Cn(1, S, EA)).expr == rfn_plus(S)
    assert normalize(Cn(1, S, PA)).expr == RfnIter(0, None, S, EPSILON_ZERO)
    assert normalize(Cn(1, S, ISigma(2))).expr == RfnIter(0, None, S, omega_tower(2))
    assert normalize(Cn(1, S, IPiMinus(1))).expr == RfnIter(0, None, S, Ordinal.of(2))
    assert normalize(Cn(2, S, EA)).expr == rfn_plus(S, 1)
    assert normalize(CInf(T)).expr == Plus(T, Schema("RFN", T))
    assert normalize(Cn(1, S, Plus(EA, NConsis(1, S)))) == normalize(Cn(1, S, EA))


def test_provenance_and_attributes():
    nf = normalize(Cn(1, S, PA))
    assert [p.split(":")[0] for p in nf.provenance] == ["R3", "R2", "R1", "R4"]
    assert nf.finitely_axiomatizable is False
    plain = normalize(rfn_plus(S))
    assert plain.provenance == () and plain.finitely_axiomatizable is None


def test_stage_one_absorbs_into_infinite_stage():
    # R4 adds one stage: 1 + w_n = w_n, but 1 + 2 = 3
    e = RfnIter(0, None, rfn_plus(S), Ordinal.of(2))
    assert normalize(e).expr == RfnIter(0, None, S, Ordinal.of(3))


def test_unknown_regularity_fails_loudly():
    with pytest.raises(CannotNormalize) as info:
        normalize(Cn(1, S, T))
    assert "regularity unknown" in str(info.value)
    with pytest.raises(CannotNormalize):
        normalize(Cn(3, S, ISigma(1)))


def test_regularity_table():
    assert regularity(ISigma(2), 2) == omega_tower(2)
    assert regularity(ISigma(3), 3) == omega_tower(2)
    assert regularity(PA, 5) == EPSILON_ZERO
    assert regularity(EA, 2) == ZERO
    assert regularity(ISigma(1), 3) is None


def test_ordinal_measures():
    assert sigma_ordinal(EA, 2) == ZERO
    assert [sigma_ordinal(ISigma(n), 2) for n in (1, 2, 3)] == [omega_tower(n) for n in (1, 2, 3)]
    assert sigma_ordinal(ISigma(3), 3) == omega_tower(2)
    assert sigma_ordinal(T, 2) is None
    assert pi1_ordinal(Cn(1, EA, EA)) == OMEGA
    assert pi1_ordinal(Cn(1, EA, PA)) == EPSILON_ZERO
    assert pi1_ordinal(T) is None
    with pytest.raises(ValueError):
        sigma_ordinal(EA, 1)


def test_inclusions():
    for a, b, rule in [
        (rfn_plus(S), Cn(1, S, T), "I2"),
        (rfn_plus(S, 2), Cn(3, S, T), "I2"),
        (Cn(1, S, EA), Cn(1, S, PA), "I1"),
        (EA, PA, "atom"),
        (RfnIter(0, None, S, Ordinal.of(2)), RfnIter(0, None, S, OMEGA), "stage"),
    ]:
        d = prove_inclusion(a, b)
        assert isinstance(d, Derivation) and d.rule == rule
        assert check_derivation(d)


def test_closure_absorbs_added_axioms():
    # C(S; T + <1>Con(S)) <= C(S; T) and C(S; T + Con(U)) <= C(S; T) + Con(U)
    d = prove_inclusion(Cn(1, S, Plus(T, NConsis(1, S))), Cn(1, S, T))
    assert d.rule == "I3i" and check_derivation(d)
    con = Schema("Con", EA)
    d = prove_inclusion(Cn(1, S, Plus(T, con)), Plus(Cn(1, S, T), con))
    assert d.rule == "I3ii" and check_derivation(d)


def test_not_derivable():
    assert isinstance(prove_inclusion(Cn(1, S, PA), S), NotDerivable)
    assert isinstance(prove_inclusion(PA, EA), NotDerivable)
    assert isinstance(prove_inclusion(RfnIter(0, None, S, OMEGA), RfnIter(0, None, S, Ordinal.of(2))), NotDerivable)


def test_tampered_derivations_fail_replay():
    d = prove_inclusion(Cn(1, S, EA), Cn(1, S, PA))
    forged = Derivation(d.rule, (Cn(1, S, PA), Cn(1, S, EA)), d.premises)
    assert not check_derivation(forged)
    assert not check_derivation(Derivation("atom", (PA, EA)))
    assert not check_derivation(Derivation("magic", (PA, EA)))


def test_conservation():
    cases = [
        (rfn_plus(EA), ConIter(EA, OMEGA), Pi(1)),
        (EA_PLUS, Cn(1, EA, EA), Pi(1)),
        (RfnIter(0, None, EA, Ordinal.of(3)), ConIter(EA, parse_theory("Con(EA)@(w^3)").stage), Pi(1)),
        (RfnIter(2, None, EA, OMEGA), RFNIter(2, EA, omega_tower(1)), Pi(1)),
        (ISigma(1), RfnIter(0, None, EA, omega_tower(1)), Sigma(2)),
        (RfnIter(0, 2, EA, OMEGA), RfnIter(0, None, EA, OMEGA), Sigma(2)),
    ]
    for a, b, cls in cases:
        d = conservation_equiv(a, b, cls)
        assert isinstance(d, Derivation), (a, b)
        assert check_derivation(d)
    assert isinstance(conservation_equiv(EA, PA, Pi(1)), NotDerivable)
    assert isinstance(conservation_equiv(EA, EA, Pi(2)), Unsupported)


def test_atom_order():
    assert atom_le(EA, T)
    assert atom_le(EA_PLUS, ISigma(1)) and atom_le(ISigma(2), PA)
    assert not atom_le(PA, ISigma(3))
    assert not atom_le(ISigma(1), IPiMinus(1))


@given(st_theory())
def test_normalize_idempotent(e):
    try:
        nf = normalize(e)
    except CannotNormalize:
        return
    assert normalize(nf.expr).expr == nf.expr


@given(st_theory())
def test_normalize_strategy_independent(e):
    def run(**kw):
        try:
            return normalize(e, **kw).expr
        except CannotNormalize:
            return None
    assert run() == run(strategy="outermost") == run(order=tuple(reversed(RULE_ORDER)))


@given(st_theory())
def test_normal_forms_contain_no_closure(e):
    try:
        nf = normalize(e)
    except CannotNormalize:
        return
    assert "C[" not in str(nf) and "Cinf" not in str(nf)


def test_found_inclusions_replay_on_random_pairs():
    rng = random.Random(8)
    found = 0
    for _ in range(300):
        a, b = random_theory(rng, 2), random_theory(rng, 2)
        d = prove_inclusion(a, b)
        if isinstance(d, Derivation):
            found += 1
            assert check_derivation(d)
    assert found > 20
