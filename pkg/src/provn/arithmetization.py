"""Object-level formulas about theories: numerations, provability, reflection.

Variable conventions used by the constructions below: ``x`` (v0) ranges over
axiom codes, ``y`` (v1) is the stage parameter of a progression, ``z`` (v2)
the earlier stage and ``u`` (v3) the hole filled by diagonalization.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional, Union

from .formula import (
    All, And, BEx, DELTA0, Eq, Ex, Fn, Formula, FormulaClass, Imp, Lit, Not, Or,
    Prf, Rel, Succ, Term, Truth, Var, Zero, Sigma, canonical, classify, free_vars,
    in_class, is_sentence, substitute,
)
from .godel import encode, try_decode
from .ordinal import Ordinal, ordinal_code
from .semantics import RELATIONS, RelationSpec, register_relation
from .syntax import format_nat, parse_formula, show

X, ALPHA, BETA, HOLE = 0, 1, 2, 3

_ids = itertools.count(1)
_id_lock = threading.Lock()


def _next_id():
    with _id_lock:
        return next(_ids)


@dataclass(frozen=True)
class Numeration:
    """An elementary formula whose free variable ``var`` ranges over axiom codes.

    A progression numeration also has a stage parameter ``param``.
    """
    body: Formula
    var: int = X
    param: Optional[int] = None
    name: str = field(default="", compare=False)
    id: int = field(default=0, compare=False)

    def __post_init__(self):
        if not self.id:
            object.__setattr__(self, "id", _next_id())

    @cached_property
    def godel(self) -> int:
        return encode(self.body)

    def record(self) -> dict:
        return {"version": 1, "id": self.id, "name": self.name,
                "godel": format_nat(self.godel), "body": show(self.body)}


def make_numeration(body: Formula, var=X, param=None, name="") -> Numeration:
    if classify(body) != DELTA0:
        raise ValueError(f"a numeration must be elementary, got {classify(body)}")
    expected = {var} | ({param} if param is not None else set())
    if not free_vars(body) <= expected:
        raise ValueError(f"numeration body must have free variables {sorted(expected)}")
    return Numeration(body, var, param, name)


def _nu_code(nu) -> int:
    return nu if isinstance(nu, int) else nu.godel


# --- schema kinds -------------------------------------------------------------------

@dataclass(frozen=True)
class SchemaKind:
    kind: str  # "rfn" (local reflection), "RFN" (uniform reflection) or "con"
    level: int = 0
    restriction: Optional[FormulaClass] = None

    def __post_init__(self):
        if self.kind not in ("rfn", "RFN", "con"):
            raise ValueError(f"unknown schema kind {self.kind!r}")
        if self.level < 0:
            raise ValueError("schema level must be a natural")
        if self.kind == "RFN" and (self.restriction is None or self.restriction.kind != "Sigma"):
            raise ValueError("uniform reflection is restricted to a Sigma class")
        if self.kind == "con" and (self.level or self.restriction):
            raise ValueError("consistency takes no level or class")

    @property
    def tag(self) -> str:
        if self.kind == "con":
            return "ax:con"
        if self.kind == "RFN":
            return f"ax:RFN:{self.restriction}"
        base = f"ax:rfn{self.level}"
        return f"{base}:{self.restriction}" if self.restriction else base

    def __str__(self):
        return self.tag[3:]


def LocalRfn(level=0, restriction=None) -> SchemaKind:
    return SchemaKind("rfn", level, restriction)


def UniformRFN(n: int) -> SchemaKind:
    return SchemaKind("RFN", 0, Sigma(n))


def Con() -> SchemaKind:
    return SchemaKind("con")


# --- elementary arithmetic -------------------------------------------------------------

EA_AXIOM_TEXT = (
    "A x. ~x' = 0",
    "A x. A y. x' = y' -> x = y",
    "A x. x + 0 = x",
    "A x. A y. x + y' = (x + y)'",
    "A x. x * 0 = 0",
    "A x. A y. x * y' = x * y + x",
    "exp(0) = 1",
    "A x. exp(x') = exp(x) + exp(x)",
)
EA_AXIOMS = tuple(parse_formula(t) for t in EA_AXIOM_TEXT)


def build_induction(phi: Formula, v: int) -> Formula:
    """Universal closure of the induction axiom for ``phi`` on ``v``."""
    core = Imp(
        And(substitute(phi, v, Zero()), All(v, Imp(phi, substitute(phi, v, Succ(Var(v)))))),
        All(v, phi),
    )
    for w in sorted(free_vars(phi) - {v}, reverse=True):
        core = All(w, core)
    return core


def is_induction_instance(code: int) -> bool:
    f = try_decode(code)
    if f is None:
        return False
    g = f
    while isinstance(g, All):
        g = g.body
    try:
        conclusion = g.right
        phi, v = conclusion.body, conclusion.var
    except AttributeError:
        return False
    if not isinstance(conclusion, All) or classify(phi) != DELTA0:
        return False
    return build_induction(phi, v) == f


register_relation(RelationSpec("ind0", 1, lambda vals, _ev: is_induction_instance(vals[0])))


@lru_cache(maxsize=None)
def sigma_ea() -> Numeration:
    """Numeration of EA: its defining axioms plus elementary induction."""
    body: Formula = Rel("ind0", (Var(X),))
    for ax in reversed(EA_AXIOMS):
        body = Or(Eq(Var(X), Lit(encode(ax))), body)
    return Numeration(body, X, None, "EA")


# --- provability --------------------------------------------------------------------

BOTTOM = Eq(Zero(), Succ(Zero()))


def build_box(nu, target: Union[Formula, int, Term]) -> Formula:
    """The provability formula for ``target`` from the axioms numerated by ``nu``.

    ``target`` is a closed formula (its canonical code is embedded), the code
    of one, or a term computing a code.
    """
    if isinstance(target, Formula):
        if not is_sentence(target):
            raise ValueError("provability targets must be closed")
        t: Term = Lit(encode(canonical(target)))
    elif isinstance(target, int):
        f = try_decode(target)
        if f is None or not is_sentence(f):
            raise ValueError("target code must code a closed formula")
        t = Lit(target)
    elif isinstance(target, Term):
        t = target
    else:
        raise TypeError(f"bad provability target {target!r}")
    p = max(free_vars(t), default=-1) + 1
    return Ex(p, Prf(Lit(_nu_code(nu)), Var(p), t))


def build_truth(n: int) -> Formula:
    if n < 1:
        raise ValueError("truth definitions exist for n >= 1")
    return Truth(n, Var(X))


def build_n_provability(nu, n: int, target: Formula) -> Formula:
    """``E z. True[n](z) & box(True[n](z-bar) -> target)``."""
    if not isinstance(target, Formula) or not is_sentence(target):
        raise ValueError("n-provability targets must be closed formulas")
    if n < 1:
        raise ValueError("n-provability needs n >= 1")
    z = 0
    inner = Imp(Truth(n, Var(X)), canonical(target))
    coded = Fn("sub", (Lit(encode(inner)), Lit(X), Var(z)))
    return Ex(z, And(Truth(n, Var(z)), build_box(nu, coded)))


def _provability(nu, level, target):
    return build_box(nu, target) if level == 0 else build_n_provability(nu, level, target)


def build_schema_instance(kind: SchemaKind, nu, phi: Formula) -> Formula:
    if kind.kind == "con":
        return Not(build_box(nu, BOTTOM))
    if kind.kind == "rfn":
        if not is_sentence(phi):
            raise ValueError("local reflection instances need a sentence")
        if kind.restriction is not None and not in_class(phi, kind.restriction):
            raise ValueError(f"instance must be in class {kind.restriction}")
        return Imp(_provability(nu, kind.level, phi), phi)
    fv = free_vars(phi)
    if len(fv) != 1:
        raise ValueError("uniform reflection instances need exactly one free variable")
    if not in_class(phi, kind.restriction):
        raise ValueError(f"instance must be in class {kind.restriction}")
    (v,) = fv
    coded = Fn("sub", (Lit(encode(phi)), Lit(v), Var(v)))
    return All(v, Imp(build_box(nu, coded), phi))


def _first_prf(f):
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Prf):
            return g
        for name in ("body", "left", "right"):
            if hasattr(g, name) and isinstance(getattr(g, name), Formula):
                stack.append(getattr(g, name))
    return None


def instance_numeration(kind: SchemaKind, x: int) -> Optional[int]:
    """The numeration code ``y`` such that ``x`` codes an instance of ``kind`` over ``y``."""
    f = try_decode(x)
    if f is None:
        return None
    prf = _first_prf(f)
    if prf is None or not isinstance(prf.numeration, Lit):
        return None
    y = prf.numeration.value
    nu = try_decode(y)
    if nu is None or len(free_vars(nu)) != 1:
        return None
    if kind.kind == "con":
        phi = None
    elif kind.kind == "rfn":
        phi = getattr(f, "right", None)
    else:
        phi = getattr(getattr(f, "body", None), "right", None)
    if kind.kind != "con" and not isinstance(phi, Formula):
        return None
    try:
        rebuilt = build_schema_instance(kind, y, phi)
    except (ValueError, TypeError):
        return None
    return y if rebuilt == f else None


def build_ax_recognizer(kind: SchemaKind):
    """Return ``(accepts, Ax_R)``: a decision procedure on pairs of naturals, and
    the atom ``Ax_R(x, y)`` backed by it.

    ``accepts(x, y)`` holds when ``x`` codes an instance of the schema over the
    numeration coded by ``y``.  The instance spells out ``#y``, so ``x > y``.
    """
    def accepts(x: int, y: int) -> bool:
        return instance_numeration(kind, x) == y

    def candidates(position, values):
        if position != 1:
            return None
        y = instance_numeration(kind, values[0])
        return set() if y is None else {y}

    if kind.tag not in RELATIONS:
        register_relation(RelationSpec(kind.tag, 2, lambda v, _ev: accepts(v[0], v[1]), candidates))
    return accepts, Rel(kind.tag, (Var(X), Var(1)))


# --- diagonalization and progressions ----------------------------------------------------

def diagonal_fixed_point(template: Formula, hole: int = HOLE) -> Formula:
    """``template`` with the hole replaced by the literal code of ``template``.

    Inside the template ``sub(h, #hole, h)`` then computes the code of the result.
    """
    if classify(template) != DELTA0:
        raise ValueError("the template must be elementary")
    if hole not in free_vars(template):
        return template
    return substitute(template, hole, Lit(encode(template)))


def self_code_term(hole: int = HOLE) -> Term:
    return Fn("sub", (Var(hole), Lit(hole), Var(hole)))


def progression_template(base: Numeration, kind: SchemaKind) -> Formula:
    """``sigma(x) | E z<x. z < y & Ax_R(x, code of rho(z-bar, .))`` with ``<`` the notation order."""
    _, ax = build_ax_recognizer(kind)
    body = base.body if base.var == X else substitute(base.body, base.var, Var(X))
    stage_code = Fn("sub", (self_code_term(), Lit(ALPHA), Var(BETA)))
    step = And(Rel("prec", (Var(BETA), Var(ALPHA))), Rel(ax.name, (Var(X), stage_code)))
    return Or(body, BEx(BETA, Var(X), step))


@dataclass(frozen=True)
class Progression:
    base: Numeration
    kind: SchemaKind
    template: Formula
    rho: Numeration

    def stage(self, alpha: Ordinal) -> Numeration:
        body = substitute(self.rho.body, ALPHA, Lit(ordinal_code(alpha)))
        return Numeration(body, X, None, f"{self.rho.name}@{alpha}")

    def stage_code(self, alpha: Ordinal) -> int:
        return encode(substitute(self.rho.body, ALPHA, Lit(ordinal_code(alpha))))


def iterated_numeration(base: Numeration, kind: SchemaKind) -> Progression:
    """The progression of ``kind`` over ``base`` along the ordinal notations."""
    template = progression_template(base, kind)
    rho = diagonal_fixed_point(template)
    name = f"{kind}({base.name or base.id})"
    return Progression(base, kind, template, Numeration(rho, X, ALPHA, name))
