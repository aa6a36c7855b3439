"""Rewriting and inference over theory expressions.

Rewrite rules used by :func:`normalize` (``S`` and ``T`` are arbitrary
theories, ``n >= 0``):

    R1  C[n+1](S; EA)                       => S + Rfn[n](S)
    R2  C[n+1](S; Rfn[n](T)@a)              => Rfn[n](C[n+1](S; T))@a
    R3  C[n+1](S; T)                        => C[n+1](S; Rfn[n](EA)@a)
        when T is Sigma(n+2)-regular with ordinal a > 0 (see REGULARITY), and
        C[n+1](S; Rfn[n]{Sigma n+2}(T)@a)  => C[n+1](S; Rfn[n](T)@a)
    R4  Rfn[n](S + Rfn[n](S))@a             => Rfn[n](S)@(1+a)
    R5  C[k](S; T + <k>Con(U))              => C[k](S; T)        for U in {S, EA}
    R6  Cinf(T)                             => T + RFN(T)
    R7  C[m+1](S; ISigma(m))                => C[m+1](S; EA + <m+1>Con(EA))
        C[1](S; EA+)                        => C[1](S; EA + <1>Con(EA))
    R8  C[1](S; ISigma-(m)), C[1](S; IPi-(m+1)) => Rfn(S)@w_m      (m >= 1)
        C[n+1](S; IPi-(n+1))                => Rfn[n](S)@2

Normalization is innermost-first and tries the rules in the order
R7, R5, R3, R2, R1, R4, R6, R8.  A ``C[n]`` node that no rule removes is an
error rather than a silent pass-through.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .formula import FormulaClass, Pi, Sigma
from .ordinal import (
    EPSILON_ZERO, ONE, OMEGA, ZERO, Ordinal, add, omega_power, omega_tower, TOWER_CAP,
)
from .theory import (
    EA, EA_PLUS, Atom, CInf, Cn, ConIter, Iter, NConsis, Plus, RFNIter, RfnIter,
    Schema, TheoryExpr, TVar, children, rebuild, show_theory,
)

RULE_ORDER = ("R7", "R5", "R3", "R2", "R1", "R4", "R6", "R8")


class CannotNormalize(ValueError):
    pass


# --- regularity data ------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityEntry:
    theory: TheoryExpr
    level: Optional[int]  # Sigma level k; None means every k >= 2
    ordinal: Ordinal
    citation: str


def _seed_regularity():
    entries = [
        RegularityEntry(EA, None, ZERO, "EA is its own skeleton"),
        RegularityEntry(Atom("PA"), None, EPSILON_ZERO, "PA at every level"),
    ]
    for m in range(1, TOWER_CAP + 1):
        for n in range(m):
            entries.append(RegularityEntry(
                Atom("ISigma", m), n + 2, omega_tower(m - n),
                "Sigma(n+2) consequences of ISigma(m) are Rfn[n]{Sigma n+2}(EA)@w_(m-n)"))
    return tuple(entries)


REGULARITY: Tuple[RegularityEntry, ...] = _seed_regularity()


def regularity(t: TheoryExpr, k: int) -> Optional[Ordinal]:
    for entry in REGULARITY:
        if entry.theory == t and entry.level in (None, k):
            return entry.ordinal
    return None


# --- rules ---------------------------------------------------------------------------

def _rfn_schema(s, n, sigma=None):
    return Schema("Rfn", s, n, sigma)


def _r1(e):
    if isinstance(e, Cn) and e.t == EA:
        return Plus(e.s, _rfn_schema(e.s, e.n - 1))


def _r2(e):
    if isinstance(e, Cn) and isinstance(e.t, RfnIter):
        it = e.t
        if it.sigma is None and it.level == e.n - 1:
            return RfnIter(it.level, None, Cn(e.n, e.s, it.base), it.stage)


def _r3(e):
    if not isinstance(e, Cn):
        return None
    n = e.n - 1
    it = e.t
    if isinstance(it, RfnIter) and it.level == n and it.sigma == n + 2:
        return Cn(e.n, e.s, RfnIter(n, None, it.base, it.stage))
    if isinstance(it, Atom):
        a = regularity(it, n + 2)
        if a is not None and a != ZERO:
            return Cn(e.n, e.s, RfnIter(n, None, EA, a))


def _r4(e):
    if isinstance(e, RfnIter) and e.sigma is None and isinstance(e.base, Plus):
        s, schema = e.base.base, e.base.schema
        if schema == _rfn_schema(s, e.level):
            return RfnIter(e.level, None, s, add(ONE, e.stage))


def _r5(e):
    if isinstance(e, Cn) and isinstance(e.t, Plus):
        sch = e.t.schema
        if sch.kind == "NCon" and sch.level == e.n and sch.theory in (e.s, EA):
            return Cn(e.n, e.s, e.t.base)


def _r6(e):
    if isinstance(e, CInf):
        return Plus(e.t, Schema("RFN", e.t))


def _r7(e):
    if not isinstance(e, Cn):
        return None
    t = e.t
    if e.n > 1 and t == Atom("ISigma", e.n - 1):
        return Cn(e.n, e.s, Plus(EA, NConsis(e.n, EA)))
    if t == EA_PLUS and e.n == 1:
        return Cn(1, e.s, Plus(EA, NConsis(1, EA)))


def _r8(e):
    if not isinstance(e, Cn) or not isinstance(e.t, Atom):
        return None
    t, n = e.t, e.n - 1
    if t.kind == "IPi-" and t.n == e.n:
        return RfnIter(n, None, e.s, Ordinal.of(2))
    if e.n == 1 and t.kind == "ISigma-":
        return RfnIter(0, None, e.s, omega_tower(t.n))
    if e.n == 1 and t.kind == "IPi-" and t.n >= 2:
        return RfnIter(0, None, e.s, omega_tower(t.n - 1))


RULES = {"R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6, "R7": _r7, "R8": _r8}


@dataclass(frozen=True)
class NormalForm:
    expr: TheoryExpr
    # False once a C[n] node was eliminated (such theories are never finitely
    # axiomatized); None when nothing is known either way.
    finitely_axiomatizable: Optional[bool]
    provenance: Tuple[str, ...] = field(default=(), compare=False)

    def __str__(self):
        return show_theory(self.expr)


def contains_closure(e: TheoryExpr) -> bool:
    if isinstance(e, (Cn, CInf)):
        return True
    return any(contains_closure(c) for c in children(e))


def _contains_cn(e):
    return isinstance(e, Cn) or any(_contains_cn(c) for c in children(e))


class _Rewriter:
    def __init__(self, order):
        self.order = tuple(order)
        self.log = []

    def step(self, e):
        for rid in self.order:
            out = RULES[rid](e)
            if out is not None:
                self.log.append(f"{rid}: {show_theory(e)} => {show_theory(out)}")
                return out
        return None

    def stuck(self, e):
        if isinstance(e, (Cn, CInf)):
            raise CannotNormalize(f"cannot normalize: regularity unknown for {show_theory(e)}")
        return e

    def innermost(self, e):
        e = rebuild(e, [self.innermost(c) for c in children(e)])
        while True:
            out = self.step(e)
            if out is None:
                return self.stuck(e)
            e = rebuild(out, [self.innermost(c) for c in children(out)])

    def outermost(self, e):
        while True:
            out = self.step(e)
            if out is not None:
                e = out
                continue
            kids = [self.outermost(c) for c in children(e)]
            new = rebuild(e, kids)
            if new == e:
                return self.stuck(e)
            e = new


def normalize(e: TheoryExpr, strategy: str = "innermost", order=RULE_ORDER) -> NormalForm:
    """Rewrite to a fixpoint; raises CannotNormalize when a closure node is stuck."""
    rw = _Rewriter(order)
    if strategy == "innermost":
        out = rw.innermost(e)
    elif strategy == "outermost":
        out = rw.outermost(e)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    flag = False if _contains_cn(e) else None
    return NormalForm(out, flag, tuple(rw.log))


def _try_normalize(e):
    if not contains_closure(e):
        return e
    try:
        return normalize(e).expr
    except CannotNormalize:
        return None


# --- ordinal measures ---------------------------------------------------------------

def sigma_ordinal(e: TheoryExpr, k: int = 2) -> Optional[Ordinal]:
    """The Sigma(k) ordinal of ``e``, or None when it cannot be derived."""
    if k < 2:
        raise ValueError("Sigma ordinals are defined for k >= 2")
    e = _try_normalize(e)
    if e is None:
        return None
    if isinstance(e, Atom):
        return regularity(e, k)
    n = k - 2
    if isinstance(e, RfnIter) and e.base == EA and e.level == n and e.sigma in (None, k):
        return e.stage
    if isinstance(e, Plus) and e.base == EA and e.schema in (_rfn_schema(EA, n), _rfn_schema(EA, n, k)):
        return ONE
    return None


def pi1_ordinal(e: TheoryExpr) -> Optional[Ordinal]:
    """The Pi1 ordinal, read off the Con-progression a normal form is Pi1-equivalent to."""
    e = _try_normalize(e)
    if e is None:
        return None
    if e == EA:
        return ZERO
    if e == EA_PLUS or e == Plus(EA, _rfn_schema(EA, 0)):
        return OMEGA
    if isinstance(e, RfnIter) and e.base == EA and e.level == 0 and e.sigma in (None, 2):
        return omega_power(e.stage) if e.stage != ZERO else ZERO
    if isinstance(e, ConIter) and e.base == EA:
        return e.stage
    return None


# --- derivations -----------------------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: tuple
    premises: Tuple["Derivation", ...] = ()

    def lines(self, indent=0):
        out = [f"{'  ' * indent}{self.rule}: {_judgement(self.conclusion)}"]
        for p in self.premises:
            out.extend(p.lines(indent + 1))
        return out

    def to_dict(self):
        return {"rule": self.rule,
                "conclusion": [str(c) for c in self.conclusion],
                "premises": [p.to_dict() for p in self.premises]}


def _judgement(c):
    if len(c) == 2:
        return f"{show_theory(c[0])} <= {show_theory(c[1])}"
    return f"{show_theory(c[0])} =={c[2]} {show_theory(c[1])}"


@dataclass(frozen=True)
class NotDerivable:
    reason: str = "not derivable"

    def __str__(self):
        return self.reason


@dataclass(frozen=True)
class Unsupported:
    reason: str

    def __str__(self):
        return self.reason


_CHAIN = {"EA": 0, "EA+": 1, "PA": 10 ** 9}


def _rank(a: Atom):
    if a.kind in _CHAIN:
        return _CHAIN[a.kind]
    return 1 + a.n  # ISigma(n), and the parameter-free fragments sit below it


def atom_le(a: TheoryExpr, b: TheoryExpr) -> bool:
    """Known inclusions between atoms; every theory extends EA."""
    if a == EA:
        return True
    if not (isinstance(a, Atom) and isinstance(b, Atom)):
        return False
    if b.kind in ("ISigma-", "IPi-"):
        return a == b
    return _rank(a) <= _rank(b)


def _iter_key(e):
    if isinstance(e, RfnIter):
        return ("Rfn", e.level, e.sigma, e.base)
    if isinstance(e, RFNIter):
        return ("RFN", e.sigma, e.base)
    if isinstance(e, ConIter):
        return ("Con", e.base)
    return None


def _i2_ok(a, b):
    return isinstance(b, Cn) and (a == b.s or a == Plus(b.s, _rfn_schema(b.s, b.n - 1)))


def _stage_ok(a, b):
    ka = _iter_key(a)
    return ka is not None and ka == _iter_key(b) and a.stage <= b.stage


class _Search:
    def __init__(self):
        self.memo = {}

    def prove(self, a, b, depth):
        key = (a, b, depth)
        if key not in self.memo:
            self.memo[key] = None  # cut cycles
            self.memo[key] = self._prove(a, b, depth)
        return self.memo[key]

    def _prove(self, a, b, depth):
        if a == b:
            return Derivation("refl", (a, b))
        if atom_le(a, b):
            return Derivation("atom", (a, b))
        if _i2_ok(a, b):
            return Derivation("I2", (a, b))
        if _stage_ok(a, b):
            return Derivation("stage", (a, b))
        if depth <= 0:
            return None
        d = depth - 1
        if isinstance(a, Cn) and isinstance(b, Cn) and (a.n, a.s) == (b.n, b.s):
            p = self.prove(a.t, b.t, d)
            if p:
                return Derivation("I1", (a, b), (p,))
        if isinstance(a, Cn) and isinstance(a.t, Plus):
            sch = a.t.schema
            if sch == NConsis(a.n, a.s):
                p = self.prove(Cn(a.n, a.s, a.t.base), b, d)
                if p:
                    return Derivation("I3i", (a, b), (p,))
            if sch.kind == "Con":
                p = self.prove(Plus(Cn(a.n, a.s, a.t.base), sch), b, d)
                if p:
                    return Derivation("I3ii", (a, b), (p,))
        if isinstance(a, Plus) and isinstance(b, Plus) and a.schema == b.schema:
            p = self.prove(a.base, b.base, d)
            if p:
                return Derivation("mono+", (a, b), (p,))
        if isinstance(b, Plus):
            p = self.prove(a, b.base, d)
            if p:
                return Derivation("base+", (a, b), (p,))
        if isinstance(b, Iter):
            p = self.prove(a, b.base, d)
            if p:
                return Derivation("base-iter", (a, b), (p,))
        na, nb = _try_normalize(a), _try_normalize(b)
        if na is not None and nb is not None and (na, nb) != (a, b):
            p = self.prove(na, nb, d)
            if p:
                return Derivation("I4", (a, b), (p,))
        return None


def prove_inclusion(a: TheoryExpr, b: TheoryExpr, depth: int = 8):
    """A derivation of ``a <= b`` (every theorem of a is one of b), or NotDerivable."""
    d = _Search().prove(a, b, depth)
    return d if d is not None else NotDerivable()


def check_derivation(d: Derivation) -> bool:
    """Replay a derivation against the rule definitions."""
    if not isinstance(d, Derivation):
        return False
    if not all(check_derivation(p) for p in d.premises):
        return False
    if len(d.conclusion) == 3:
        return _check_conservation(d)
    a, b = d.conclusion
    prem = [p.conclusion for p in d.premises]
    rule = d.rule
    if rule == "refl":
        return a == b and not prem
    if rule == "atom":
        return atom_le(a, b) and not prem
    if rule == "I2":
        return _i2_ok(a, b) and not prem
    if rule == "stage":
        return _stage_ok(a, b) and not prem
    if len(prem) != 1 and rule != "trans":
        return False
    if rule == "I1":
        return (isinstance(a, Cn) and isinstance(b, Cn) and (a.n, a.s) == (b.n, b.s)
                and prem[0] == (a.t, b.t))
    if rule == "I3i":
        return (isinstance(a, Cn) and isinstance(a.t, Plus) and a.t.schema == NConsis(a.n, a.s)
                and prem[0] == (Cn(a.n, a.s, a.t.base), b))
    if rule == "I3ii":
        return (isinstance(a, Cn) and isinstance(a.t, Plus) and a.t.schema.kind == "Con"
                and prem[0] == (Plus(Cn(a.n, a.s, a.t.base), a.t.schema), b))
    if rule == "mono+":
        return (isinstance(a, Plus) and isinstance(b, Plus) and a.schema == b.schema
                and prem[0] == (a.base, b.base))
    if rule == "base+":
        return isinstance(b, Plus) and prem[0] == (a, b.base)
    if rule == "base-iter":
        return isinstance(b, Iter) and prem[0] == (a, b.base)
    if rule == "I4":
        na, nb = _try_normalize(a), _try_normalize(b)
        return prem[0] == (na, nb)
    if rule == "trans":
        return len(prem) == 2 and prem[0][0] == a and prem[1][1] == b and prem[0][1] == prem[1][0]
    return False


# --- conservation --------------------------------------------------------------------

def _stage_zero(e):
    if isinstance(e, Iter) and e.stage == ZERO:
        return e.base


def _pi1_step(e):
    if contains_closure(e):
        out = _try_normalize(e)
        return ("I4", out) if out is not None else None
    if e == EA_PLUS:
        return ("K1", Cn(1, EA, EA))
    if e == Plus(EA, _rfn_schema(EA, 0)):
        return ("K2", ConIter(EA, OMEGA))
    if isinstance(e, RfnIter) and e.base == EA and e.sigma is None:
        if e.level == 0:
            return ("K3", ConIter(EA, omega_power(e.stage)))
        return ("K3", RFNIter(e.level, EA, omega_power(e.stage)))
    out = _stage_zero(e)
    return ("stage0", out) if out is not None else None


def _sigma2_step(e):
    if contains_closure(e):
        out = _try_normalize(e)
        return ("I4", out) if out is not None else None
    if isinstance(e, RfnIter) and e.level == 0 and e.sigma == 2:
        return ("S1", RfnIter(0, None, e.base, e.stage))
    if isinstance(e, Atom) and e != EA:
        a = regularity(e, 2)
        if a is not None:
            return ("S2", RfnIter(0, None, EA, a))
    out = _stage_zero(e)
    return ("stage0", out) if out is not None else None


_STEPS = {"Pi1": _pi1_step, "Sigma2": _sigma2_step}


def _chain(e, step, cls):
    out = []
    for _ in range(16):
        s = step(e)
        if s is None:
            break
        rule, nxt = s
        out.append(Derivation(rule, (e, nxt, cls)))
        e = nxt
    return e, out


def conservation_equiv(a: TheoryExpr, b: TheoryExpr, cls: FormulaClass):
    """Derive ``a ==cls b`` (same theorems of class ``cls``) from the conservation rules."""
    step = _STEPS.get(str(cls))
    if step is None:
        return Unsupported(f"unsupported class {cls}: rules cover Pi1 and Sigma2")
    name = str(cls)
    ra, pa = _chain(a, step, name)
    rb, pb = _chain(b, step, name)
    if ra != rb:
        return NotDerivable()
    return Derivation("conserve", (a, b, name), tuple(pa) + tuple(pb))


def _check_conservation(d):
    a, b, name = d.conclusion
    step = _STEPS.get(name)
    if step is None:
        return False
    if d.rule != "conserve":
        s = step(a)
        return s is not None and s == (d.rule, b) and not d.premises
    ends = {"a": a, "b": b}
    side = "a"
    for p in d.premises:
        x, y, n = p.conclusion
        if n != name:
            return False
        if x == ends[side]:
            ends[side] = y
        elif side == "a" and x == ends["b"]:
            side = "b"
            ends["b"] = y
        else:
            return False
    return ends["a"] == ends["b"]
