"""Syntax of first-order arithmetic over 0, successor, +, *, exp.

Besides the usual constructors there are a few designated pieces:

* ``Lit(n)`` is a binary numeral literal, an abbreviation of the dyadic
  numeral term for ``n`` (see :func:`expand_literal`).  Codes are spliced into
  formulas this way, since a unary numeral for a Goedel number is far too big.
* ``Fn(name, args)`` applies a registered elementary function (for instance
  ``sub``, the code-level substitution behind the bar notation).
* ``Prf``, ``Truth`` and ``Rel`` are atoms with a fixed declared class whose
  meaning is supplied by :mod:`provn.semantics`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple, Union


class Term:
    __slots__ = ()

    def __str__(self):
        from .syntax import show_term
        return show_term(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    index: int


@dataclass(frozen=True, repr=False)
class Zero(Term):
    pass


@dataclass(frozen=True, repr=False)
class Succ(Term):
    arg: Term


@dataclass(frozen=True, repr=False)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Exp(Term):
    arg: Term


@dataclass(frozen=True, repr=False)
class Lit(Term):
    value: int


@dataclass(frozen=True, repr=False)
class Fn(Term):
    name: str
    args: Tuple[Term, ...]


class Formula:
    __slots__ = ()

    def __str__(self):
        from .syntax import show
        return show(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


for _cls in (Var, Zero, Succ, Add, Mul, Exp, Lit, Fn):
    _cls.__repr__ = lambda self: f"<{type(self).__name__} {self}>"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class All(Formula):
    var: int
    body: Formula


@dataclass(frozen=True, repr=False)
class Ex(Formula):
    var: int
    body: Formula


@dataclass(frozen=True, repr=False)
class BAll(Formula):
    var: int
    bound: Term
    body: Formula

    def __post_init__(self):
        if self.var in term_vars(self.bound):
            raise ValueError("bounded variable occurs in its own bound")


@dataclass(frozen=True, repr=False)
class BEx(Formula):
    var: int
    bound: Term
    body: Formula

    def __post_init__(self):
        if self.var in term_vars(self.bound):
            raise ValueError("bounded variable occurs in its own bound")


@dataclass(frozen=True, repr=False)
class Prf(Formula):
    """``proof`` codes a proof of ``target`` from the axioms numerated by the
    formula coded by ``numeration``."""
    numeration: Term
    proof: Term
    target: Term


@dataclass(frozen=True, repr=False)
class Truth(Formula):
    level: int
    arg: Term

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("truth definitions exist for levels >= 1")


@dataclass(frozen=True, repr=False)
class Rel(Formula):
    name: str
    args: Tuple[Term, ...]


Quantifier = (All, Ex, BAll, BEx)
Binary = (And, Or, Imp)
Syntax = Union[Term, Formula]


# --- numerals ----------------------------------------------------------------

def numeral(n: int) -> Term:
    """0 followed by n successor symbols."""
    if n < 0:
        raise ValueError("numerals denote naturals")
    t: Term = Zero()
    for _ in range(n):
        t = Succ(t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, Succ):
        t = t.arg
        n += 1
    return n if isinstance(t, Zero) else None


_TWO = Succ(Succ(Zero()))


def expand_literal(n: int) -> Term:
    """The dyadic numeral term a literal abbreviates."""
    if n < 0:
        raise ValueError("numerals denote naturals")
    if n == 0:
        return Zero()
    if n == 1:
        return Succ(Zero())
    half = Mul(_TWO, expand_literal(n // 2))
    return Succ(half) if n % 2 else half


# --- variables -----------------------------------------------------------------

def term_vars(t: Term) -> FrozenSet[int]:
    out = set()
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            out.add(t.index)
        elif isinstance(t, (Succ, Exp)):
            stack.append(t.arg)
        elif isinstance(t, (Add, Mul)):
            stack.append(t.left)
            stack.append(t.right)
        elif isinstance(t, Fn):
            stack.extend(t.args)
    return frozenset(out)


def _atom_terms(f):
    if isinstance(f, Eq):
        return (f.left, f.right)
    if isinstance(f, Prf):
        return (f.numeration, f.proof, f.target)
    if isinstance(f, Truth):
        return (f.arg,)
    if isinstance(f, Rel):
        return f.args
    return None


def free_vars(f: Syntax) -> FrozenSet[int]:
    if isinstance(f, Term):
        return term_vars(f)
    terms = _atom_terms(f)
    if terms is not None:
        return frozenset().union(*map(term_vars, terms)) if terms else frozenset()
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, Binary):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (All, Ex)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, (BAll, BEx)):
        return term_vars(f.bound) | (free_vars(f.body) - {f.var})
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f: Syntax) -> FrozenSet[int]:
    if isinstance(f, Term):
        return term_vars(f)
    terms = _atom_terms(f)
    if terms is not None:
        return frozenset().union(*map(term_vars, terms)) if terms else frozenset()
    if isinstance(f, Not):
        return all_vars(f.body)
    if isinstance(f, Binary):
        return all_vars(f.left) | all_vars(f.right)
    if isinstance(f, (All, Ex)):
        return all_vars(f.body) | {f.var}
    if isinstance(f, (BAll, BEx)):
        return term_vars(f.bound) | all_vars(f.body) | {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def fresh_var(*items) -> int:
    used = set()
    for item in items:
        used |= all_vars(item)
    return max(used) + 1 if used else 0


# --- substitution ----------------------------------------------------------------

def substitute_term(t: Term, var: int, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.index == var else t
    if isinstance(t, (Zero, Lit)):
        return t
    if isinstance(t, Succ):
        return Succ(substitute_term(t.arg, var, s))
    if isinstance(t, Exp):
        return Exp(substitute_term(t.arg, var, s))
    if isinstance(t, (Add, Mul)):
        return type(t)(substitute_term(t.left, var, s), substitute_term(t.right, var, s))
    if isinstance(t, Fn):
        return Fn(t.name, tuple(substitute_term(a, var, s) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def substitute(f: Syntax, var: int, t: Term) -> Syntax:
    """Capture-avoiding substitution of ``t`` for the free occurrences of ``var``."""
    if isinstance(f, Term):
        return substitute_term(f, var, t)
    if var not in free_vars(f):
        return f
    return _subst(f, var, t, term_vars(t))


def _subst(f, var, t, tvars):
    if isinstance(f, Eq):
        return Eq(substitute_term(f.left, var, t), substitute_term(f.right, var, t))
    if isinstance(f, Prf):
        return Prf(*(substitute_term(a, var, t) for a in (f.numeration, f.proof, f.target)))
    if isinstance(f, Truth):
        return Truth(f.level, substitute_term(f.arg, var, t))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(substitute_term(a, var, t) for a in f.args))
    if isinstance(f, Not):
        return Not(_subst(f.body, var, t, tvars))
    if isinstance(f, Binary):
        return type(f)(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, Quantifier):
        bounded = isinstance(f, (BAll, BEx))
        bound = substitute_term(f.bound, var, t) if bounded else None
        if f.var == var:
            return type(f)(f.var, bound, f.body) if bounded else f
        y, body = f.var, f.body
        if y in tvars and var in free_vars(body):
            z = fresh_var(f, t)
            body = substitute(body, y, Var(z))
            y = z
        body = substitute(body, var, t)
        return type(f)(y, bound, body) if bounded else type(f)(y, body)
    raise TypeError(f"not a formula: {f!r}")


def matching_term(a, b, x, bound=frozenset()):
    """First subterm of ``b`` sitting where ``a`` has a free ``x``.

    Walks both trees in step, so ``b`` should be an instance of ``a``.
    """
    if isinstance(a, Var):
        return b if a.index == x and x not in bound else None
    if type(a) is not type(b):
        return None
    if isinstance(a, (All, Ex, BAll, BEx)):
        if isinstance(a, (BAll, BEx)):
            t = matching_term(a.bound, b.bound, x, bound)
            if t is not None:
                return t
        return matching_term(a.body, b.body, x, bound | {a.var})
    for name in getattr(a, "__dataclass_fields__", ()):
        va, vb = getattr(a, name), getattr(b, name)
        if isinstance(va, tuple) and isinstance(vb, tuple):
            pairs = zip(va, vb)
        elif hasattr(va, "__dataclass_fields__"):
            pairs = [(va, vb)]
        else:
            continue
        for pa, pb in pairs:
            t = matching_term(pa, pb, x, bound)
            if t is not None:
                return t
    return None


def canonical(f: Formula) -> Formula:
    """Rename bound variables deterministically; alpha-equivalent inputs agree."""
    base = max(free_vars(f), default=-1) + 1
    return _canon(f, base, {})


def _canon(f, depth, ren):
    def tm(t):
        return _rename_term(t, ren)

    if isinstance(f, Eq):
        return Eq(tm(f.left), tm(f.right))
    if isinstance(f, Prf):
        return Prf(tm(f.numeration), tm(f.proof), tm(f.target))
    if isinstance(f, Truth):
        return Truth(f.level, tm(f.arg))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(tm(a) for a in f.args))
    if isinstance(f, Not):
        return Not(_canon(f.body, depth, ren))
    if isinstance(f, Binary):
        return type(f)(_canon(f.left, depth, ren), _canon(f.right, depth, ren))
    if isinstance(f, (All, Ex)):
        inner = dict(ren)
        inner[f.var] = depth
        return type(f)(depth, _canon(f.body, depth + 1, inner))
    if isinstance(f, (BAll, BEx)):
        bound = tm(f.bound)
        inner = dict(ren)
        inner[f.var] = depth
        return type(f)(depth, bound, _canon(f.body, depth + 1, inner))
    raise TypeError(f"not a formula: {f!r}")


def _rename_term(t, ren):
    if not ren:
        return t
    if isinstance(t, Var):
        return Var(ren.get(t.index, t.index))
    if isinstance(t, (Zero, Lit)):
        return t
    if isinstance(t, (Succ, Exp)):
        return type(t)(_rename_term(t.arg, ren))
    if isinstance(t, (Add, Mul)):
        return type(t)(_rename_term(t.left, ren), _rename_term(t.right, ren))
    if isinstance(t, Fn):
        return Fn(t.name, tuple(_rename_term(a, ren) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def alpha_equal(a: Formula, b: Formula) -> bool:
    return free_vars(a) == free_vars(b) and canonical(a) == canonical(b)


# --- classification ---------------------------------------------------------------

@dataclass(frozen=True)
class FormulaClass:
    kind: str  # "Delta0", "Sigma" or "Pi"
    level: int = 0

    def __str__(self):
        return "Delta0(exp)" if self.kind == "Delta0" else f"{self.kind}{self.level}"

    def dual(self) -> "FormulaClass":
        return {"Sigma": Pi, "Pi": Sigma}.get(self.kind, lambda n: DELTA0)(self.level)

    def contains(self, other: "FormulaClass") -> bool:
        """Syntactic inclusion of classes: Delta0 in everything, Sigma_n, Pi_n in both level-(n+1) classes."""
        if other.kind == "Delta0":
            return True
        if self.kind == "Delta0":
            return False
        if self.kind == other.kind:
            return other.level <= self.level
        return other.level < self.level


DELTA0 = FormulaClass("Delta0")


def Sigma(n: int) -> FormulaClass:
    if n < 1:
        raise ValueError("Sigma_n needs n >= 1")
    return FormulaClass("Sigma", n)


def Pi(n: int) -> FormulaClass:
    if n < 1:
        raise ValueError("Pi_n needs n >= 1")
    return FormulaClass("Pi", n)


def parse_class(text: str) -> FormulaClass:
    s = text.replace(" ", "").replace("_", "")
    if s.lower() in ("delta0", "delta0(exp)"):
        return DELTA0
    for kind, make in (("Sigma", Sigma), ("Pi", Pi)):
        if s.startswith(kind) and s[len(kind):].isdigit():
            return make(int(s[len(kind):]))
    raise ValueError(f"unknown formula class {text!r}")


def levels(f: Formula) -> Tuple[int, int]:
    """Least (Sigma level, Pi level) containing ``f``; (0, 0) for bounded formulas."""
    if isinstance(f, (Eq, Prf, Rel)):
        return (0, 0)
    if isinstance(f, Truth):
        return (f.level + 1, f.level)
    if isinstance(f, Not):
        s, p = levels(f.body)
        return (p, s)
    if isinstance(f, (And, Or)):
        a, b = levels(f.left), levels(f.right)
        return (max(a[0], b[0]), max(a[1], b[1]))
    if isinstance(f, Imp):
        a, b = levels(f.left), levels(f.right)
        return (max(a[1], b[0]), max(a[0], b[1]))
    if isinstance(f, (BAll, BEx)):
        return levels(f.body)
    if isinstance(f, Ex):
        s, p = levels(f.body)
        s2 = min(max(s, 1), p + 1)
        return (s2, s2 + 1)
    if isinstance(f, All):
        s, p = levels(f.body)
        p2 = min(max(p, 1), s + 1)
        return (p2 + 1, p2)
    raise TypeError(f"not a formula: {f!r}")


def classify(f: Formula) -> FormulaClass:
    """Least syntactic class; bounded quantifiers do not raise it.

    When a formula sits at the same level on both sides (say a Pi_1 and a Sigma_1
    conjunct) the Sigma class is reported.
    """
    s, p = levels(f)
    if s == 0 and p == 0:
        return DELTA0
    if p < s:
        return Pi(p)
    return Sigma(s)


def in_class(f: Formula, cls: FormulaClass) -> bool:
    s, p = levels(f)
    if s == 0 and p == 0:
        return True
    if cls.kind == "Delta0":
        return False
    return (s if cls.kind == "Sigma" else p) <= cls.level


def nnf(f: Formula) -> Formula:
    """Negation normal form: negations only on atoms, no implications."""
    if isinstance(f, (Eq, Prf, Truth, Rel)):
        return f
    if isinstance(f, Imp):
        return Or(nnf(Not(f.left)), nnf(f.right))
    if isinstance(f, (And, Or)):
        return type(f)(nnf(f.left), nnf(f.right))
    if isinstance(f, (All, Ex)):
        return type(f)(f.var, nnf(f.body))
    if isinstance(f, (BAll, BEx)):
        return type(f)(f.var, f.bound, nnf(f.body))
    g = f.body
    if isinstance(g, (Eq, Prf, Truth, Rel)):
        return f
    if isinstance(g, Not):
        return nnf(g.body)
    if isinstance(g, And):
        return Or(nnf(Not(g.left)), nnf(Not(g.right)))
    if isinstance(g, Or):
        return And(nnf(Not(g.left)), nnf(Not(g.right)))
    if isinstance(g, Imp):
        return And(nnf(g.left), nnf(Not(g.right)))
    if isinstance(g, All):
        return Ex(g.var, nnf(Not(g.body)))
    if isinstance(g, Ex):
        return All(g.var, nnf(Not(g.body)))
    if isinstance(g, BAll):
        return BEx(g.var, g.bound, nnf(Not(g.body)))
    if isinstance(g, BEx):
        return BAll(g.var, g.bound, nnf(Not(g.body)))
    raise TypeError(f"not a formula: {f!r}")


def prenex(f: Formula) -> Formula:
    """Pull unbounded quantifiers to the front (bounded ones stay in the matrix)."""
    g = _rename_apart(nnf(f), [fresh_var(f)])
    prefix, matrix = _pull(g)
    for q, v in reversed(prefix):
        matrix = q(v, matrix)
    return matrix


def _rename_apart(f, counter):
    if isinstance(f, (And, Or)):
        return type(f)(_rename_apart(f.left, counter), _rename_apart(f.right, counter))
    if isinstance(f, Quantifier):
        z = counter[0]
        counter[0] += 1
        body = _rename_apart(substitute(f.body, f.var, Var(z)), counter)
        if isinstance(f, (BAll, BEx)):
            return type(f)(z, f.bound, body)
        return type(f)(z, body)
    return f


def _pull(f):
    if isinstance(f, (All, Ex)):
        prefix, matrix = _pull(f.body)
        return [(type(f), f.var)] + prefix, matrix
    if isinstance(f, (And, Or)):
        lp, lm = _pull(f.left)
        rp, rm = _pull(f.right)
        return lp + rp, type(f)(lm, rm)
    return [], f
