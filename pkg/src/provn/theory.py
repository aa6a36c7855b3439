"""Symbolic theory expressions and their text form.

Grammar::

    expr    := primary ('+' schema)*
    primary := EA | EA+ | PA | ISigma(n) | ISigma-(n) | IPi-(n) | NAME
             | C[n](expr; expr) | Cinf(expr)
             | Rfn[n]{Sigma k}(expr)@ord | RFN{Sigma k}(expr)@ord | Con(expr)@ord
             | '(' expr ')'
    schema  := Rfn[n]{Sigma k}(expr) | RFN{Sigma k}(expr) | Con(expr) | <n>Con(expr)

``[0]`` and the class restriction may be omitted.  A stage is a simple ordinal
such as ``w_2`` or ``e0``, or any ordinal in parentheses.  Any other name
(``S``, ``T``, ``U``) stands for an arbitrary theory extending EA.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .ordinal import Ordinal, OrdinalSyntaxError, format_ordinal, parse_ordinal


class TheoryExpr:
    __slots__ = ()

    def __str__(self):
        return show_theory(self)

    def __repr__(self):
        return f"<{type(self).__name__} {show_theory(self)}>"


ATOM_KINDS = ("EA", "EA+", "PA", "ISigma", "ISigma-", "IPi-")


@dataclass(frozen=True, repr=False)
class Atom(TheoryExpr):
    kind: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown theory {self.kind!r}")
        indexed = self.kind in ("ISigma", "ISigma-", "IPi-")
        if indexed != (self.n is not None) or (indexed and self.n < 1):
            raise ValueError(f"{self.kind} takes {'an index n >= 1' if indexed else 'no index'}")


@dataclass(frozen=True, repr=False)
class TVar(TheoryExpr):
    name: str


@dataclass(frozen=True, repr=False)
class Schema(TheoryExpr):
    """An axiom schema over a theory, the right operand of ``+``.

    kind "Rfn" (local reflection of ``level``), "RFN" (uniform), "Con", or
    "NCon" (the ``level``-consistency assertion).  ``sigma`` restricts the
    instances to Sigma_k formulas.
    """
    kind: str
    theory: TheoryExpr
    level: int = 0
    sigma: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("Rfn", "RFN", "Con", "NCon"):
            raise ValueError(f"unknown schema {self.kind!r}")
        if self.level < 0 or (self.sigma is not None and self.sigma < 1):
            raise ValueError("levels are naturals and classes start at Sigma1")


@dataclass(frozen=True, repr=False)
class Plus(TheoryExpr):
    base: TheoryExpr
    schema: Schema


@dataclass(frozen=True, repr=False)
class RfnIter(TheoryExpr):
    level: int
    sigma: Optional[int]
    base: TheoryExpr
    stage: Ordinal


@dataclass(frozen=True, repr=False)
class RFNIter(TheoryExpr):
    sigma: Optional[int]
    base: TheoryExpr
    stage: Ordinal


@dataclass(frozen=True, repr=False)
class ConIter(TheoryExpr):
    base: TheoryExpr
    stage: Ordinal


@dataclass(frozen=True, repr=False)
class Cn(TheoryExpr):
    n: int
    s: TheoryExpr
    t: TheoryExpr

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("C[n] needs n >= 1")


@dataclass(frozen=True, repr=False)
class CInf(TheoryExpr):
    t: TheoryExpr


Iter = (RfnIter, RFNIter, ConIter)

EA = Atom("EA")
EA_PLUS = Atom("EA+")
PA = Atom("PA")


def ISigma(n):
    return Atom("ISigma", n)


def ISigmaMinus(n):
    return Atom("ISigma-", n)


def IPiMinus(n):
    return Atom("IPi-", n)


def NConsis(n, s):
    return Schema("NCon", s, n)


def children(e: TheoryExpr):
    if isinstance(e, Schema):
        return (e.theory,)
    if isinstance(e, Plus):
        return (e.base, e.schema)
    if isinstance(e, Iter):
        return (e.base,)
    if isinstance(e, Cn):
        return (e.s, e.t)
    if isinstance(e, CInf):
        return (e.t,)
    return ()


def rebuild(e: TheoryExpr, kids) -> TheoryExpr:
    if isinstance(e, Schema):
        return Schema(e.kind, kids[0], e.level, e.sigma)
    if isinstance(e, Plus):
        return Plus(kids[0], kids[1])
    if isinstance(e, RfnIter):
        return RfnIter(e.level, e.sigma, kids[0], e.stage)
    if isinstance(e, RFNIter):
        return RFNIter(e.sigma, kids[0], e.stage)
    if isinstance(e, ConIter):
        return ConIter(kids[0], e.stage)
    if isinstance(e, Cn):
        return Cn(e.n, kids[0], kids[1])
    if isinstance(e, CInf):
        return CInf(kids[0])
    return e


def depth(e: TheoryExpr) -> int:
    return 1 + max((depth(c) for c in children(e)), default=0)


# --- printing ---------------------------------------------------------------------

def _stage(a: Ordinal) -> str:
    s = format_ordinal(a)
    return f"({s})" if "+" in s or "(" in s else s


def _sigma(k):
    return "" if k is None else f"{{Sigma {k}}}"


def _rfn_head(level, sigma):
    return "Rfn" + (f"[{level}]" if level else "") + _sigma(sigma)


def show_theory(e: TheoryExpr) -> str:
    if isinstance(e, Atom):
        return e.kind if e.n is None else f"{e.kind}({e.n})"
    if isinstance(e, TVar):
        return e.name
    if isinstance(e, Schema):
        inner = show_theory(e.theory)
        if e.kind == "Rfn":
            return f"{_rfn_head(e.level, e.sigma)}({inner})"
        if e.kind == "RFN":
            return f"RFN{_sigma(e.sigma)}({inner})"
        if e.kind == "Con":
            return f"Con({inner})"
        return f"<{e.level}>Con({inner})"
    if isinstance(e, Plus):
        return f"{show_theory(e.base)} + {show_theory(e.schema)}"
    if isinstance(e, RfnIter):
        return f"{_rfn_head(e.level, e.sigma)}({show_theory(e.base)})@{_stage(e.stage)}"
    if isinstance(e, RFNIter):
        return f"RFN{_sigma(e.sigma)}({show_theory(e.base)})@{_stage(e.stage)}"
    if isinstance(e, ConIter):
        return f"Con({show_theory(e.base)})@{_stage(e.stage)}"
    if isinstance(e, Cn):
        return f"C[{e.n}]({show_theory(e.s)}; {show_theory(e.t)})"
    if isinstance(e, CInf):
        return f"Cinf({show_theory(e.t)})"
    raise TypeError(f"not a theory expression: {e!r}")


# --- parsing ------------------------------------------------------------------------

class TheorySyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(EA\+(?!\s*[A-Za-z<(]))|(ISigma-|IPi-)|([A-Za-z_][A-Za-z0-9_]*)|(\d+)|([()\[\]{};+<>@]))"
)
_STAGE = re.compile(r"[0-9we_^*]+")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, message, pos=None):
        raise TheorySyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        return m.group(m.lastindex) if m else None

    def take(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            self.skip()
            if self.pos >= len(self.text):
                self.fail("unexpected end of input")
            self.fail(f"unexpected character {self.text[self.pos]!r}")
        self.pos = m.end()
        return m.group(m.lastindex)

    def expect(self, tok):
        self.skip()
        start = self.pos
        if self.peek() != tok:
            self.fail(f"expected {tok!r}", start)
        self.take()

    def natural(self):
        self.skip()
        start = self.pos
        tok = self.peek()
        if tok is None or not tok.isdigit():
            self.fail("expected a natural number", start)
        self.take()
        return int(tok)

    def parse(self):
        e = self.expr()
        self.skip()
        if self.pos != len(self.text):
            self.fail(f"unexpected {self.text[self.pos]!r}")
        return e

    def expr(self):
        e = self.primary()
        while True:
            self.skip()
            if self.peek() != "+":
                return e
            self.take()
            self.skip()
            start = self.pos
            s = self.schema_or_iter()
            if not isinstance(s, Schema):
                self.fail("expected a schema after '+'", start)
            e = Plus(e, s)

    def primary(self):
        self.skip()
        start = self.pos
        tok = self.peek()
        if tok is None:
            self.fail("expected a theory" if self.pos < len(self.text) else "unexpected end of input")
        if tok == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if tok in ("Rfn", "RFN", "Con", "<"):
            e = self.schema_or_iter()
            if isinstance(e, Schema):
                self.fail("a schema needs a base theory and '+', or a stage '@'", start)
            return e
        self.take()
        if tok in ("EA", "EA+", "PA"):
            return Atom(tok)
        if tok in ("ISigma", "ISigma-", "IPi-"):
            self.expect("(")
            self.skip()
            at = self.pos
            n = self.natural()
            self.expect(")")
            if n < 1:
                self.fail(f"{tok} needs n >= 1", at)
            return Atom(tok, n)
        if tok == "C":
            self.expect("[")
            self.skip()
            at = self.pos
            n = self.natural()
            self.expect("]")
            if n < 1:
                self.fail("C[n] needs n >= 1", at)
            self.expect("(")
            s = self.expr()
            self.expect(";")
            t = self.expr()
            self.expect(")")
            return Cn(n, s, t)
        if tok == "Cinf":
            self.expect("(")
            t = self.expr()
            self.expect(")")
            return CInf(t)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return TVar(tok)
        self.fail(f"unexpected {tok!r}", start)

    def sigma(self):
        self.skip()
        if self.peek() != "{":
            return None
        self.take()
        self.skip()
        start = self.pos
        if self.take() != "Sigma":
            self.fail("expected 'Sigma'", start)
        k = self.natural()
        if k < 1:
            self.fail("classes start at Sigma 1", start)
        self.expect("}")
        return k

    def schema_or_iter(self):
        self.skip()
        start = self.pos
        head = self.take()
        level, sigma = 0, None
        if head == "<":
            level = self.natural()
            self.expect(">")
            self.skip()
            if self.take() != "Con":
                self.fail("expected 'Con' after <n>", start)
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return NConsis(level, e)
        if head == "Rfn":
            self.skip()
            if self.peek() == "[":
                self.take()
                level = self.natural()
                self.expect("]")
            sigma = self.sigma()
        elif head == "RFN":
            sigma = self.sigma()
        elif head != "Con":
            self.fail("expected a schema (Rfn, RFN, Con or <n>Con)", start)
        self.expect("(")
        base = self.expr()
        self.expect(")")
        self.skip()
        if self.peek() != "@":
            return Schema(head, base, level, sigma)
        self.take()
        stage = self.stage()
        if head == "Rfn":
            return RfnIter(level, sigma, base, stage)
        if head == "RFN":
            return RFNIter(sigma, base, stage)
        return ConIter(base, stage)

    def stage(self):
        self.skip()
        start = self.pos
        if self.text.startswith("(", start):
            depth_, i = 0, start
            while i < len(self.text):
                depth_ += {"(": 1, ")": -1}.get(self.text[i], 0)
                if depth_ == 0:
                    break
                i += 1
            if depth_:
                self.fail("unbalanced parenthesis in stage", start)
            raw, self.pos = self.text[start + 1:i], i + 1
            offset = start + 1
        else:
            m = _STAGE.match(self.text, start)
            if not m:
                self.fail("expected an ordinal stage", start)
            raw, self.pos, offset = m.group(), m.end(), start
        try:
            return parse_ordinal(raw)
        except OrdinalSyntaxError as exc:
            raise TheorySyntaxError(f"bad ordinal ({exc})", self.text, offset + exc.pos) from None


def parse_theory(text: str) -> TheoryExpr:
    return _Parser(text).parse()


def to_json(e: TheoryExpr) -> dict:
    """Tree form for machine-readable output."""
    if isinstance(e, Atom):
        return {"node": "Atom", "kind": e.kind, "n": e.n}
    if isinstance(e, TVar):
        return {"node": "Var", "name": e.name}
    if isinstance(e, Schema):
        return {"node": "Schema", "kind": e.kind, "level": e.level, "sigma": e.sigma,
                "theory": to_json(e.theory)}
    if isinstance(e, Plus):
        return {"node": "Plus", "base": to_json(e.base), "schema": to_json(e.schema)}
    if isinstance(e, RfnIter):
        return {"node": "RfnIter", "level": e.level, "sigma": e.sigma,
                "base": to_json(e.base), "stage": format_ordinal(e.stage)}
    if isinstance(e, RFNIter):
        return {"node": "RFNIter", "sigma": e.sigma, "base": to_json(e.base),
                "stage": format_ordinal(e.stage)}
    if isinstance(e, ConIter):
        return {"node": "ConIter", "base": to_json(e.base), "stage": format_ordinal(e.stage)}
    if isinstance(e, Cn):
        return {"node": "Cn", "n": e.n, "s": to_json(e.s), "t": to_json(e.t)}
    if isinstance(e, CInf):
        return {"node": "CInf", "t": to_json(e.t)}
    raise TypeError(f"not a theory expression: {e!r}")


def from_json(d: dict) -> TheoryExpr:
    node = d["node"]
    if node == "Atom":
        return Atom(d["kind"], d.get("n"))
    if node == "Var":
        return TVar(d["name"])
    if node == "Schema":
        return Schema(d["kind"], from_json(d["theory"]), d.get("level", 0), d.get("sigma"))
    if node == "Plus":
        return Plus(from_json(d["base"]), from_json(d["schema"]))
    if node == "RfnIter":
        return RfnIter(d["level"], d.get("sigma"), from_json(d["base"]), parse_ordinal(d["stage"]))
    if node == "RFNIter":
        return RFNIter(d.get("sigma"), from_json(d["base"]), parse_ordinal(d["stage"]))
    if node == "ConIter":
        return ConIter(from_json(d["base"]), parse_ordinal(d["stage"]))
    if node == "Cn":
        return Cn(d["n"], from_json(d["s"]), from_json(d["t"]))
    if node == "CInf":
        return CInf(from_json(d["t"]))
    raise ValueError(f"unknown node {node!r}")
