"""Bounded evaluation in the standard model, and axiom enumeration.

Verdicts are three-valued.  ``True`` and ``False`` are only reported when they
are exact; an unbounded quantifier that cannot be settled by its search
(values below ``qbound`` plus any supplied ``witnesses``) gives
``Unknown(quantifier-bound)``, and running out of fuel gives ``Unknown(fuel)``.

A bounded existential whose body pins the bound variable down (an equation
``v = t``, or a registered relation with a candidate generator) is searched
over that finite candidate set instead of the whole range.  The candidate set
is complete, so the verdict stays exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, Optional, Tuple

from .formula import (
    Add, All, And, BAll, BEx, Eq, Ex, Exp, Fn, Formula, Imp, Lit, Mul, Not, Or,
    Prf, Rel, Succ, Term, Truth, Var, Zero, Pi, free_vars, in_class,
    matching_term, numeral_value, substitute, term_vars,
)
from .godel import encode, try_decode
from .ordinal import compare, Ordering, ordinal_code, ordinal_from_code
from .proofs import ProofObject, check_proof

EXP_CAP = 1 << 20


@dataclass(frozen=True)
class Verdict:
    value: Optional[bool]
    reason: Optional[str] = None  # "fuel" or "quantifier-bound" when unknown

    @property
    def exact(self):
        return self.value is not None

    def __str__(self):
        if self.value is None:
            return f"Unknown ({self.reason})"
        return f"{self.value} (exact)"


TRUE = Verdict(True)
FALSE = Verdict(False)
UNKNOWN_FUEL = Verdict(None, "fuel")
UNKNOWN_BOUND = Verdict(None, "quantifier-bound")


def _of(b: bool) -> Verdict:
    return TRUE if b else FALSE


def v_not(v):
    return v if v.value is None else _of(not v.value)


# --- registries --------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionSpec:
    name: str
    arity: int
    compute: Callable
    # invert(position, args, target) -> set of values for args[position], or None
    invert: Optional[Callable] = None


@dataclass(frozen=True)
class RelationSpec:
    name: str
    arity: int
    holds: Callable  # (values, evaluator) -> bool
    # candidates(position, values) -> complete set for values[position], or None
    candidates: Optional[Callable] = None


FUNCTIONS: Dict[str, FunctionSpec] = {}
RELATIONS: Dict[str, RelationSpec] = {}


def register_function(spec: FunctionSpec):
    FUNCTIONS[spec.name] = spec
    return spec


def register_relation(spec: RelationSpec):
    RELATIONS[spec.name] = spec
    return spec


@lru_cache(maxsize=65536)
def sub(code: int, var: int, value: int) -> int:
    """Code of the formula coded by ``code`` with ``#value`` put for ``var``.

    Numbers that are not formula codes are left alone, so the function is total.
    """
    f = try_decode(code)
    if f is None:
        return code
    return encode(substitute(f, var, Lit(value)))


def _invert_sub(position, args, target):
    if position != 2:
        return None
    code, var = args[0], args[1]
    f = try_decode(code)
    if f is None or var not in free_vars(f):
        return None if target == code or (f is not None and target == encode(f)) else set()
    g = try_decode(target)
    if g is None:
        return set()
    t = matching_term(f, g, var)
    if isinstance(t, Lit) and sub(code, var, t.value) == target:
        return {t.value}
    return set()


register_function(FunctionSpec("sub", 3, sub, _invert_sub))


def _prec(values, _ev):
    a, b = ordinal_from_code(values[0]), ordinal_from_code(values[1])
    return a is not None and b is not None and compare(a, b) == Ordering.LESS


register_relation(RelationSpec("prec", 2, _prec))


# --- evaluation ------------------------------------------------------------------

class OutOfFuel(Exception):
    pass


class EvaluationError(ValueError):
    pass


class Evaluator:
    def __init__(self, fuel=100_000, qbound=100, witnesses: Iterable[int] = ()):
        if fuel <= 0 or qbound <= 0:
            raise ValueError("fuel and qbound must be positive")
        self.fuel = fuel
        self.qbound = qbound
        self.witnesses = tuple(witnesses)

    def charge(self, n=1):
        self.fuel -= n
        if self.fuel < 0:
            raise OutOfFuel()

    # terms
    def term(self, t: Term, env) -> int:
        self.charge()
        if isinstance(t, Var):
            try:
                return env[t.index]
            except KeyError:
                raise EvaluationError(f"variable {t} has no value") from None
        if isinstance(t, Lit):
            return t.value
        if isinstance(t, (Zero, Succ)):
            n = numeral_value(t)
            if n is not None:
                self.charge(n // 64)
                return n
            k = 0
            while isinstance(t, Succ):
                t, k = t.arg, k + 1
            return self.term(t, env) + k
        if isinstance(t, Add):
            return self.term(t.left, env) + self.term(t.right, env)
        if isinstance(t, Mul):
            a, b = self.term(t.left, env), self.term(t.right, env)
            self.charge((a.bit_length() + b.bit_length()) // 4096)
            return a * b
        if isinstance(t, Exp):
            n = self.term(t.arg, env)
            if n > EXP_CAP:
                raise OutOfFuel()
            self.charge(n >> 10)
            return 1 << n
        if isinstance(t, Fn):
            spec = FUNCTIONS.get(t.name)
            if spec is None or spec.arity != len(t.args):
                raise EvaluationError(f"unknown function {t.name}/{len(t.args)}")
            return spec.compute(*(self.term(a, env) for a in t.args))
        raise TypeError(f"not a term: {t!r}")

    # formulas
    def formula(self, f: Formula, env) -> Verdict:
        try:
            return self._formula(f, env)
        except OutOfFuel:
            return UNKNOWN_FUEL

    def _formula(self, f, env):
        self.charge()
        if isinstance(f, Eq):
            return _of(self.term(f.left, env) == self.term(f.right, env))
        if isinstance(f, Not):
            return v_not(self._formula(f.body, env))
        if isinstance(f, And):
            a = self._formula(f.left, env)
            if a.value is False:
                return a
            b = self._formula(f.right, env)
            if b.value is False or a.value is True:
                return b
            return a
        if isinstance(f, Or):
            a = self._formula(f.left, env)
            if a.value is True:
                return a
            b = self._formula(f.right, env)
            if b.value is True or a.value is False:
                return b
            return a
        if isinstance(f, Imp):
            return self._formula(Or(Not(f.left), f.right), env)
        if isinstance(f, (BAll, BEx)):
            return self._bounded(f, env)
        if isinstance(f, (All, Ex)):
            return self._unbounded(f, env)
        if isinstance(f, Truth):
            return self._truth(f, env)
        if isinstance(f, Prf):
            return self._prf(f, env)
        if isinstance(f, Rel):
            spec = RELATIONS.get(f.name)
            if spec is None or spec.arity != len(f.args):
                raise EvaluationError(f"unknown relation @{f.name}/{len(f.args)}")
            out = spec.holds(tuple(self.term(a, env) for a in f.args), self)
            return out if isinstance(out, Verdict) else _of(bool(out))
        raise TypeError(f"not a formula: {f!r}")

    def _search(self, f, env, values):
        """Kleene disjunction (Ex) or conjunction (All) over ``values``."""
        stop = isinstance(f, (Ex, BEx))
        unknown = None
        for n in values:
            v = self._formula(f.body, {**env, f.var: n})
            if v.value is stop:
                return v
            if v.value is None and unknown is None:
                unknown = v
        return unknown or _of(not stop)

    def _bounded(self, f, env):
        bound = self.term(f.bound, env)
        if isinstance(f, BEx):
            cands = self.candidates(f.var, f.body, env)
            if cands is not None:
                return self._search(f, env, sorted(c for c in cands if c < bound))
        self.charge(bound)
        return self._search(f, env, range(bound))

    def _unbounded(self, f, env):
        if isinstance(f, Ex):
            cands = self.candidates(f.var, f.body, env)
            if cands is not None:
                return self._search(f, env, sorted(cands))
        values = list(range(self.qbound)) + [w for w in self.witnesses if w >= self.qbound]
        v = self._search(f, env, values)
        if v.value is None:
            return v
        settled = isinstance(f, Ex) == v.value
        return v if settled else UNKNOWN_BOUND

    def _truth(self, f, env):
        g = try_decode(self.term(f.arg, env))
        if g is None or free_vars(g) or not in_class(g, Pi(f.level)):
            return FALSE
        return self._formula(g, {})

    def _prf(self, f, env):
        nu_code = self.term(f.numeration, env)
        p = self.term(f.proof, env)
        target = try_decode(self.term(f.target, env))
        nu = try_decode(nu_code)
        if target is None or nu is None or len(free_vars(nu)) != 1:
            return FALSE
        try:
            proof = ProofObject.from_code(p)
        except (ValueError, UnicodeDecodeError):
            return FALSE
        if proof.conclusion != target:
            return FALSE
        (var,) = free_vars(nu)
        pending = []

        def axiom(g):
            v = self._formula(nu, {var: encode(g)})
            if v.value is None:
                pending.append(v)
            return v.value is True

        ok = check_proof(proof, target, axiom)
        if not ok and pending:
            return pending[0]
        return _of(ok)

    # narrowing
    def candidates(self, var, body, env):
        """A complete finite set of values for ``var`` making ``body`` true, or None."""
        conjuncts, stack = [], [body]
        while stack:
            g = stack.pop()
            if isinstance(g, And):
                stack.extend((g.right, g.left))
            else:
                conjuncts.append(g)
        for g in conjuncts:
            found = self._narrow(var, g, env)
            if found is not None:
                return found
        return None

    def _narrow(self, var, g, env):
        if isinstance(g, Eq):
            for a, b in ((g.left, g.right), (g.right, g.left)):
                if var in term_vars(a) and var not in term_vars(b):
                    found = self.invert(a, var, self.term(b, env), env)
                    if found is not None:
                        return found
            return None
        if not isinstance(g, Rel):
            return None
        spec = RELATIONS.get(g.name)
        if spec is None or spec.candidates is None:
            return None
        hits = [i for i, a in enumerate(g.args) if var in term_vars(a)]
        if len(hits) != 1:
            return None
        i = hits[0]
        values = [None if j == i else self.term(a, env) for j, a in enumerate(g.args)]
        targets = spec.candidates(i, tuple(values))
        if targets is None:
            return None
        out = set()
        for target in targets:
            inv = self.invert(g.args[i], var, target, env)
            if inv is None:
                return None
            out |= inv
        return out

    def invert(self, t, var, target, env):
        """Values of ``var`` for which ``t`` evaluates to ``target``; None if unknown."""
        if t == Var(var):
            return {target}
        if isinstance(t, Succ):
            return self.invert(t.arg, var, target - 1, env) if target > 0 else set()
        if isinstance(t, Fn):
            spec = FUNCTIONS.get(t.name)
            hits = [i for i, a in enumerate(t.args) if var in term_vars(a)]
            if spec is None or spec.invert is None or len(hits) != 1:
                return None
            i = hits[0]
            values = tuple(None if j == i else self.term(a, env) for j, a in enumerate(t.args))
            inner = spec.invert(i, values, target)
            if inner is None:
                return None
            out = set()
            for value in inner:
                sub_inv = self.invert(t.args[i], var, value, env)
                if sub_inv is None:
                    return None
                out |= sub_inv
            return out
        return None


def evaluate(f: Formula, env=None, fuel=100_000, qbound=100, witnesses=()) -> Verdict:
    """Evaluate ``f`` under ``env`` (variable index to natural)."""
    env = dict(env or {})
    for k, v in env.items():
        if not isinstance(k, int) or not isinstance(v, int) or v < 0:
            raise EvaluationError(f"ill-formed environment entry {k!r}: {v!r}")
    missing = free_vars(f) - set(env)
    if missing:
        raise EvaluationError(f"free variables without values: {sorted(missing)}")
    return Evaluator(fuel, qbound, witnesses).formula(f, env)


# --- axiom enumeration ----------------------------------------------------------------

@dataclass(frozen=True)
class AxiomSet:
    codes: Tuple[int, ...]
    complete: bool
    unknown: Tuple[int, ...] = ()


def enumerate_axioms(nu, alpha=None, max_code=1000, fuel=10_000, candidates=(),
                     qbound=16) -> AxiomSet:
    """Codes ``x <= max_code`` (plus any extra ``candidates``) that ``nu`` accepts.

    ``nu`` is a numeration: ``nu.body`` with axiom variable ``nu.var``; a
    progression also has ``nu.param`` for the stage, set from ``alpha``.
    """
    if max_code < 0 or fuel <= 0:
        raise ValueError("max_code must be a natural and fuel positive")
    env = {}
    if alpha is not None:
        param = getattr(nu, "param", None)
        if param is None:
            raise ValueError("a stage was given for a numeration without a stage parameter")
        env[param] = ordinal_code(alpha)
    xs = sorted(set(range(max_code + 1)) | set(candidates))
    found, unknown = [], []
    for x in xs:
        v = Evaluator(fuel, qbound).formula(nu.body, {**env, nu.var: x})
        if v.value is True:
            found.append(x)
        elif v.value is None:
            unknown.append(x)
    return AxiomSet(tuple(found), not unknown, tuple(unknown))
