"""Concrete text syntax for terms and formulas.

Formulas::

    A x. phi        E x. phi        A x<t. phi      E x<t. phi
    ~phi   phi & psi   phi | psi   phi -> psi      (-> associates right)
    s = t   Prf(c, p, t)   True[n](t)   @name(t1, ..., tk)

Terms: ``0``, a decimal ``n`` (unary numeral), ``#n`` or ``#0x..`` (literal),
postfix ``'`` for successor, ``exp(t)``, ``f(t1, ..., tk)`` for registered
functions, ``+`` and ``*`` (left associative), variables ``x y z u v w ...``
with an optional numeric suffix.  Quantifier bodies extend as far right as
possible.
"""
from __future__ import annotations

import re

from .formula import (
    Add, All, And, BAll, BEx, Eq, Ex, Exp, Fn, Formula, Imp, Lit, Mul, Not, Or,
    Prf, Rel, Succ, Term, Truth, Var, Zero, numeral, numeral_value,
)

VAR_LETTERS = "xyzuvwpqrstabcdefghijklmno"


class FormulaSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos}")
        self.text = text
        self.pos = pos


DECIMAL_BITS = 8000


def format_nat(n: int) -> str:
    """Decimal, or hex for numbers too long for the int-to-str limit."""
    return str(n) if n.bit_length() <= DECIMAL_BITS else hex(n)


def parse_nat(text: str) -> int:
    return int(text, 16) if text.lower().startswith("0x") else int(text)


def var_name(i: int) -> str:
    letter = VAR_LETTERS[i % 26]
    return letter if i < 26 else f"{letter}{i // 26}"


def var_index(name: str):
    if not name or name[0] not in VAR_LETTERS:
        return None
    rest = name[1:]
    if rest == "":
        return VAR_LETTERS.index(name[0])
    if rest.isdigit() and rest[0] != "0":
        return VAR_LETTERS.index(name[0]) + 26 * int(rest)
    return None


# --- printing -----------------------------------------------------------------

def show_term(t: Term, prec: int = 0) -> str:
    n = numeral_value(t)
    if n is not None:
        return str(n)
    ticks = 0
    while isinstance(t, Succ):
        t = t.arg
        ticks += 1
    if ticks:
        return show_term(t, 3) + "'" * ticks
    if isinstance(t, Var):
        return var_name(t.index)
    if isinstance(t, Lit):
        return f"#{format_nat(t.value)}"
    if isinstance(t, Exp):
        return f"exp({show_term(t.arg)})"
    if isinstance(t, Fn):
        return f"{t.name}({', '.join(show_term(a) for a in t.args)})"
    if isinstance(t, Add):
        s = f"{show_term(t.left, 1)} + {show_term(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, Mul):
        s = f"{show_term(t.left, 2)} * {show_term(t.right, 3)}"
        return f"({s})" if prec > 2 else s
    raise TypeError(f"not a term: {t!r}")


def show(f: Formula, prec: int = 0) -> str:
    if isinstance(f, Eq):
        return f"{show_term(f.left)} = {show_term(f.right)}"
    if isinstance(f, Prf):
        return f"Prf({show_term(f.numeration)}, {show_term(f.proof)}, {show_term(f.target)})"
    if isinstance(f, Truth):
        return f"True[{f.level}]({show_term(f.arg)})"
    if isinstance(f, Rel):
        return f"@{f.name}({', '.join(show_term(a) for a in f.args)})"
    if isinstance(f, Not):
        return "~" + show(f.body, 4)
    if isinstance(f, Imp):
        s = f"{show(f.left, 2)} -> {show(f.right, 1)}"
        return f"({s})" if prec > 1 else s
    if isinstance(f, Or):
        s = f"{show(f.left, 2)} | {show(f.right, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(f, And):
        s = f"{show(f.left, 3)} & {show(f.right, 4)}"
        return f"({s})" if prec > 3 else s
    if isinstance(f, (All, Ex, BAll, BEx)):
        q = "A" if isinstance(f, (All, BAll)) else "E"
        bound = f"<{show_term(f.bound)}" if isinstance(f, (BAll, BEx)) else ""
        s = f"{q} {var_name(f.var)}{bound}. {show(f.body)}"
        return f"({s})" if prec > 1 else s
    raise TypeError(f"not a formula: {f!r}")


# --- parsing ----------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(->)|(#0[xX][0-9a-fA-F]+|#\d+)|(\d+)|(@[A-Za-z_][A-Za-z0-9_:]*)|([A-Za-z_][A-Za-z0-9_:]*)|([()\[\],.<=+*~&|']))"
)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = []
        pos = 0
        end = len(text.rstrip())
        while pos < end:
            m = _TOKEN.match(text, pos)
            if not m:
                pos += len(text[pos:]) - len(text[pos:].lstrip())
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            self.toks.append((m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j][0] if j < len(self.toks) else None

    def pos(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def fail(self, message):
        raise FormulaSyntaxError(message, self.text, self.pos())

    def take(self):
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok):
        if self.peek() != tok:
            self.fail(f"expected {tok!r}")
        self.i += 1

    def done(self):
        if self.peek() is not None:
            self.fail(f"unexpected {self.peek()!r}")

    # formulas
    def formula(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Imp(left, self.formula())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("A", "E"):
            return self.quantifier()
        if tok == "Prf" and self.peek(1) == "(":
            self.take()
            self.take()
            args = self.term_list(3)
            return Prf(*args)
        if tok == "True" and self.peek(1) == "[":
            self.take()
            self.take()
            level = self.natural()
            self.expect("]")
            self.expect("(")
            arg = self.term()
            self.expect(")")
            if level < 1:
                self.fail("truth level must be at least 1")
            return Truth(level, arg)
        if tok is not None and tok.startswith("@"):
            self.take()
            self.expect("(")
            return Rel(tok[1:], self.term_list(None))
        if tok == "(":
            save = self.i
            try:
                return self.equation()
            except FormulaSyntaxError:
                self.i = save
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        return self.equation()

    def quantifier(self):
        q = self.take()
        start = self.pos()
        name = self.take()
        v = var_index(name)
        if v is None:
            raise FormulaSyntaxError(f"expected a variable, got {name!r}", self.text, start)
        bound = None
        if self.peek() == "<":
            self.take()
            bound = self.term()
        self.expect(".")
        body = self.formula()
        if bound is None:
            return (All if q == "A" else Ex)(v, body)
        try:
            return (BAll if q == "A" else BEx)(v, bound, body)
        except ValueError as exc:
            raise FormulaSyntaxError(str(exc), self.text, start) from None

    def equation(self):
        left = self.term()
        self.expect("=")
        return Eq(left, self.term())

    def natural(self):
        tok = self.peek()
        if tok is None or not tok.isdigit():
            self.fail("expected a natural number")
        self.take()
        return int(tok)

    def term_list(self, arity):
        args = []
        if self.peek() != ")":
            args.append(self.term())
            while self.peek() == ",":
                self.take()
                args.append(self.term())
        if arity is not None and len(args) != arity:
            self.fail(f"expected {arity} arguments")
        self.expect(")")
        return tuple(args)

    # terms
    def term(self):
        t = self.product()
        while self.peek() == "+":
            self.take()
            t = Add(t, self.product())
        return t

    def product(self):
        t = self.postfix()
        while self.peek() == "*":
            self.take()
            t = Mul(t, self.postfix())
        return t

    def postfix(self):
        t = self.primary()
        while self.peek() == "'":
            self.take()
            t = Succ(t)
        return t

    def primary(self):
        tok = self.peek()
        if tok is None:
            self.fail("expected a term")
        if tok.isdigit():
            self.take()
            return numeral(int(tok))
        if tok.startswith("#"):
            self.take()
            return Lit(parse_nat(tok[1:]))
        if tok == "(":
            self.take()
            t = self.term()
            self.expect(")")
            return t
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_:]*", tok):
            if self.peek(1) == "(":
                self.take()
                self.take()
                if tok == "exp":
                    args = self.term_list(1)
                    return Exp(args[0])
                return Fn(tok, self.term_list(None))
            v = var_index(tok)
            if v is None:
                self.fail(f"unknown variable {tok!r}")
            self.take()
            return Var(v)
        self.fail(f"unexpected {tok!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    if not p.toks:
        raise FormulaSyntaxError("empty formula", text, 0)
    f = p.formula()
    p.done()
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    if not p.toks:
        raise FormulaSyntaxError("empty term", text, 0)
    t = p.term()
    p.done()
    return t
