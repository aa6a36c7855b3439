"""A small Hilbert calculus for first-order arithmetic with equality.

Each proof line states its formula and how it is justified.  Logical axioms
are instances of the schemata below; ``x < t`` abbreviates ``E z. x + z' = t``
with ``z`` fresh.

    A1   p -> (q -> p)
    A2   (p -> (q -> r)) -> ((p -> q) -> (p -> r))
    A3   (~q -> ~p) -> (p -> q)
    C1   p & q -> p
    C2   p & q -> q
    C3   p -> (q -> p & q)
    D1   p -> p | q
    D2   q -> p | q
    D3   (p -> r) -> ((q -> r) -> (p | q -> r))
    Q1   (A x. p) -> p[x := t]
    Q2   (A x. p -> q) -> (p -> A x. q)          x not free in p
    E1a  (E x. p) -> ~A x. ~p
    E1b  ~(A x. ~p) -> E x. p
    B1a  (A x<t. p) -> A x. (x < t -> p)
    B1b  (A x. (x < t -> p)) -> A x<t. p
    B2a  (E x<t. p) -> E x. (x < t & p)
    B2b  (E x. (x < t & p)) -> E x<t. p
    EQ1  t = t
    EQ2  s = t -> (p[x := s] -> p[x := t])       (cites x and p)

Rules: modus ponens (``mp i j`` with line i = p and line j = p -> q) and
generalization (``gen i var``).  Theory axioms are sentences, so unrestricted
generalization is sound.

Text form, one line per step (indices are 1-based)::

    <formula> :: logic A1
    <formula> :: logic EQ2 x ; <p>
    <formula> :: theory
    <formula> :: mp 1 2
    <formula> :: gen 3 x
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .formula import (
    Add, All, And, BAll, BEx, Eq, Ex, Formula, Imp, Not, Or, Succ, Var,
    alpha_equal, fresh_var, free_vars, matching_term, substitute,
)
from .syntax import FormulaSyntaxError, parse_formula, show, var_index, var_name

SCHEMATA = (
    "A1", "A2", "A3", "C1", "C2", "C3", "D1", "D2", "D3", "Q1", "Q2",
    "E1a", "E1b", "B1a", "B1b", "B2a", "B2b", "EQ1", "EQ2",
)

PROOF_TAG = b"\x01"


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    rule: str  # "logic", "theory", "mp" or "gen"
    schema: Optional[str] = None
    refs: Tuple[int, ...] = ()
    var: Optional[int] = None
    witness: Optional[Formula] = None


@dataclass(frozen=True)
class ProofObject:
    lines: Tuple[ProofLine, ...]

    @property
    def conclusion(self):
        return self.lines[-1].formula if self.lines else None

    def to_text(self) -> str:
        return "\n".join(_line_text(ln) for ln in self.lines)

    @classmethod
    def from_text(cls, text: str) -> "ProofObject":
        return cls(tuple(_parse_line(raw) for raw in text.splitlines() if raw.strip()))

    def code(self) -> int:
        return int.from_bytes(PROOF_TAG + self.to_text().encode("utf-8"), "big")

    @classmethod
    def from_code(cls, code: int) -> "ProofObject":
        raw = code.to_bytes((code.bit_length() + 7) // 8, "big")
        if not raw.startswith(PROOF_TAG):
            raise ValueError("not a proof code")
        return cls.from_text(raw[len(PROOF_TAG):].decode("utf-8"))


class ProofSyntaxError(ValueError):
    pass


def _line_text(ln: ProofLine) -> str:
    if ln.rule == "logic":
        just = f"logic {ln.schema}"
        if ln.schema == "EQ2":
            just += f" {var_name(ln.var)} ; {show(ln.witness)}"
    elif ln.rule == "theory":
        just = "theory"
    elif ln.rule == "mp":
        just = f"mp {ln.refs[0] + 1} {ln.refs[1] + 1}"
    else:
        just = f"gen {ln.refs[0] + 1} {var_name(ln.var)}"
    return f"{show(ln.formula)} :: {just}"


def _parse_line(raw: str) -> ProofLine:
    if " :: " not in raw:
        raise ProofSyntaxError(f"missing justification in {raw!r}")
    ftext, just = raw.rsplit(" :: ", 1)
    try:
        formula = parse_formula(ftext)
        words = just.split()
        if not words:
            raise ProofSyntaxError("empty justification")
        if words[0] == "logic" and len(words) >= 2:
            if words[1] == "EQ2":
                head, _, wtext = just.partition(";")
                parts = head.split()
                if len(parts) != 3 or var_index(parts[2]) is None:
                    raise ProofSyntaxError("EQ2 cites a variable and a formula")
                return ProofLine(formula, "logic", "EQ2", (), var_index(parts[2]), parse_formula(wtext))
            if len(words) == 2:
                return ProofLine(formula, "logic", words[1])
        if words == ["theory"]:
            return ProofLine(formula, "theory")
        if words[0] == "mp" and len(words) == 3:
            return ProofLine(formula, "mp", refs=(int(words[1]) - 1, int(words[2]) - 1))
        if words[0] == "gen" and len(words) == 3 and var_index(words[2]) is not None:
            return ProofLine(formula, "gen", refs=(int(words[1]) - 1,), var=var_index(words[2]))
    except (FormulaSyntaxError, ValueError) as exc:
        raise ProofSyntaxError(str(exc)) from None
    raise ProofSyntaxError(f"bad justification {just!r}")


# --- schema recognition -------------------------------------------------------------

def _less(x: int, t, avoid) -> Formula:
    z = fresh_var(Var(x), t, *avoid)
    return Ex(z, Eq(Add(Var(x), Succ(Var(z))), t))


def _imp(f):
    return (f.left, f.right) if isinstance(f, Imp) else None


def is_axiom_instance(schema: str, f: Formula, line: Optional[ProofLine] = None) -> bool:
    try:
        return bool(_RECOGNIZERS[schema](f, line))
    except (AttributeError, TypeError, KeyError):
        return False


def _a1(f, _):
    p, r = _imp(f)
    q, p2 = _imp(r)
    return p == p2


def _a2(f, _):
    l, r = _imp(f)
    p, qr = _imp(l)
    q, r_ = _imp(qr)
    pq, pr = _imp(r)
    return pq == Imp(p, q) and pr == Imp(p, r_)


def _a3(f, _):
    l, r = _imp(f)
    nq, np_ = _imp(l)
    return isinstance(nq, Not) and isinstance(np_, Not) and r == Imp(np_.body, nq.body)


def _c1(f, _):
    l, r = _imp(f)
    return isinstance(l, And) and l.left == r


def _c2(f, _):
    l, r = _imp(f)
    return isinstance(l, And) and l.right == r


def _c3(f, _):
    p, r = _imp(f)
    q, pq = _imp(r)
    return pq == And(p, q)


def _d1(f, _):
    l, r = _imp(f)
    return isinstance(r, Or) and r.left == l


def _d2(f, _):
    l, r = _imp(f)
    return isinstance(r, Or) and r.right == l


def _d3(f, _):
    pr, rest = _imp(f)
    qr, last = _imp(rest)
    p, r = _imp(pr)
    q, r2 = _imp(qr)
    return r == r2 and last == Imp(Or(p, q), r)


def _q1(f, _):
    l, r = _imp(f)
    if not isinstance(l, All):
        return False
    t = matching_term(l.body, r, l.var)
    if t is None:
        return alpha_equal(l.body, r)
    return alpha_equal(substitute(l.body, l.var, t), r)


def _q2(f, _):
    l, r = _imp(f)
    if not isinstance(l, All):
        return False
    p, q = _imp(l.body)
    return l.var not in free_vars(p) and r == Imp(p, All(l.var, q))


def _e1a(f, _):
    l, r = _imp(f)
    return isinstance(l, Ex) and r == Not(All(l.var, Not(l.body)))


def _e1b(f, _):
    l, r = _imp(f)
    return isinstance(r, Ex) and l == Not(All(r.var, Not(r.body)))


def _b_all(bq, q):
    return isinstance(bq, BAll) and alpha_equal(
        q, All(bq.var, Imp(_less(bq.var, bq.bound, [bq.body]), bq.body)))


def _b_ex(bq, q):
    return isinstance(bq, BEx) and alpha_equal(
        q, Ex(bq.var, And(_less(bq.var, bq.bound, [bq.body]), bq.body)))


def _eq1(f, _):
    return isinstance(f, Eq) and f.left == f.right


def _eq2(f, line):
    if line is None or line.witness is None or line.var is None:
        return False
    e, rest = _imp(f)
    a, b = _imp(rest)
    if not isinstance(e, Eq):
        return False
    p, x = line.witness, line.var
    return (alpha_equal(substitute(p, x, e.left), a)
            and alpha_equal(substitute(p, x, e.right), b))


_RECOGNIZERS = {
    "A1": _a1, "A2": _a2, "A3": _a3, "C1": _c1, "C2": _c2, "C3": _c3,
    "D1": _d1, "D2": _d2, "D3": _d3, "Q1": _q1, "Q2": _q2,
    "E1a": _e1a, "E1b": _e1b,
    "B1a": lambda f, _: _b_all(*_imp(f)), "B1b": lambda f, _: _b_all(*reversed(_imp(f))),
    "B2a": lambda f, _: _b_ex(*_imp(f)), "B2b": lambda f, _: _b_ex(*reversed(_imp(f))),
    "EQ1": _eq1, "EQ2": _eq2,
}


# --- checking ----------------------------------------------------------------------

AxiomOracle = Callable[[Formula], bool]


def check_proof(proof: ProofObject, target: Formula, axioms: AxiomOracle) -> bool:
    """True iff every line is justified and the last line is ``target``.

    ``axioms`` decides membership of a formula in the theory's axiom set.
    """
    if not proof.lines:
        return False
    seen = []
    for i, ln in enumerate(proof.lines):
        if not _justified(ln, i, seen, axioms):
            return False
        seen.append(ln.formula)
    return seen[-1] == target


def _justified(ln, i, seen, axioms):
    if any(r < 0 or r >= i for r in ln.refs):
        return False
    if ln.rule == "logic":
        return ln.schema in _RECOGNIZERS and is_axiom_instance(ln.schema, ln.formula, ln)
    if ln.rule == "theory":
        return bool(axioms(ln.formula))
    if ln.rule == "mp":
        p, pq = seen[ln.refs[0]], seen[ln.refs[1]]
        return pq == Imp(p, ln.formula)
    if ln.rule == "gen":
        return ln.var is not None and ln.formula == All(ln.var, seen[ln.refs[0]])
    return False


def line(formula, rule, *refs, schema=None, var=None, witness=None) -> ProofLine:
    """Convenience constructor taking 0-based references."""
    return ProofLine(formula, rule, schema, tuple(refs), var, witness)
