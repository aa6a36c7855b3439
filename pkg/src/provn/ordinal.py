"""Cantor normal form ordinals up to and including epsilon_0.

An ordinal below epsilon_0 is a tuple of ``(exponent, coefficient)`` terms with
strictly decreasing exponents.  Epsilon_0 itself is a distinguished top value;
arithmetic that would leave the notation system is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from math import isqrt
from typing import Optional, Tuple

TOWER_CAP = 8


class OrdinalRangeError(ArithmeticError):
    pass


class ResourceLimitError(RuntimeError):
    pass


class OrdinalSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class Ordinal:
    terms: Tuple[Tuple["Ordinal", int], ...] = ()
    top: bool = False
    # lexicographic sort key: tuple order on keys is the ordinal order
    key: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.top and self.terms:
            raise ValueError("epsilon_0 carries no terms")
        prev = None
        for exp, coef in self.terms:
            if not isinstance(exp, Ordinal) or not isinstance(coef, int):
                raise TypeError("terms are (Ordinal, int) pairs")
            if coef < 1:
                raise ValueError("coefficients must be positive")
            if exp.top:
                raise ValueError("epsilon_0 cannot be an exponent")
            if prev is not None and compare(prev, exp) != Ordering.GREATER:
                raise ValueError("exponents must strictly decrease")
            prev = exp
        key = (1,) if self.top else (0,) + tuple((e.key, c) for e, c in self.terms)
        object.__setattr__(self, "key", key)

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalRangeError("negative ordinal")
        return cls(((ZERO, n),)) if n else ZERO

    @property
    def is_zero(self):
        return not self.top and not self.terms

    @property
    def is_finite(self):
        return not self.top and all(e.is_zero for e, _ in self.terms)

    def __int__(self):
        if not self.is_finite:
            raise OrdinalRangeError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def leading_exponent(self) -> "Ordinal":
        if self.top:
            return self
        return self.terms[0][0] if self.terms else ZERO

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def __add__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        return add(self, other)

    def __radd__(self, other):
        if isinstance(other, int):
            return add(Ordinal.of(other), self)
        return NotImplemented

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))
EPSILON_ZERO = Ordinal(top=True)


def compare(a: Ordinal, b: Ordinal) -> Ordering:
    ka, kb = a.key, b.key
    return _ORDERINGS[(ka > kb) - (ka < kb)]


_ORDERINGS = (Ordering.EQUAL, Ordering.GREATER, Ordering.LESS)


def _trusted(terms) -> Ordinal:
    # terms already in normal form: skip validation, assemble the key directly
    o = object.__new__(Ordinal)
    object.__setattr__(o, "terms", terms)
    object.__setattr__(o, "top", False)
    object.__setattr__(o, "key", (0,) + tuple((e.key, c) for e, c in terms))
    return o


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if b.top:
        return EPSILON_ZERO
    if not b.terms:
        return a
    if a.top:
        raise OrdinalRangeError("addition beyond epsilon_0")
    lead, coef = b.terms[0]
    lk = lead.key
    i = 0
    for e, c in a.terms:
        if e.key > lk:
            i += 1
        else:
            if e.key == lk:
                coef += c
            break
    return _trusted(a.terms[:i] + ((lead, coef),) + b.terms[1:])


def omega_power(a: Ordinal) -> Ordinal:
    if a.top:
        return EPSILON_ZERO
    return Ordinal(((a, 1),))


def omega_tower(n: int) -> Ordinal:
    """omega_0 = omega, omega_{k+1} = omega ** omega_k."""
    if n < 0:
        raise ValueError("tower height must be a natural")
    if n > TOWER_CAP:
        raise ResourceLimitError(f"tower height {n} exceeds cap {TOWER_CAP}")
    result = OMEGA
    for _ in range(n):
        result = omega_power(result)
    return result


def tower_height(a: Ordinal) -> Optional[int]:
    """Return k if ``a`` is omega_k, else None."""
    if a == OMEGA:
        return 0
    if len(a.terms) == 1 and a.terms[0][1] == 1:
        inner = tower_height(a.terms[0][0])
        if inner is not None:
            return inner + 1
    return None


# --- text form -------------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if a.top:
        return "e0"
    if not a.terms:
        return "0"
    return "+".join(_format_term(e, c) for e, c in a.terms)


def _format_term(exp, coef):
    if exp.is_zero:
        return str(coef)
    base = _format_power(exp)
    return base if coef == 1 else f"{base}*{coef}"


def _format_power(exp):
    if exp == ONE:
        return "w"
    k = tower_height(exp)
    if k is not None:
        return f"w_{k + 1}"
    if exp.is_finite:
        return f"w^{int(exp)}"
    if len(exp.terms) == 1 and exp.terms[0][1] == 1:
        return "w^" + _format_power(exp.terms[0][0])
    return f"w^({format_ordinal(exp)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(w_)|(e0)|(w)|([\^*+()]))")


class _OrdinalParser:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                raise OrdinalSyntaxError("unexpected character", text, pos)
            start = m.start(m.lastindex)
            self.tokens.append((m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, tok):
        if self.peek() != tok:
            raise OrdinalSyntaxError(f"expected {tok!r}", self.text, self.pos())
        self.take()

    def parse(self):
        if not self.tokens:
            raise OrdinalSyntaxError("empty ordinal", self.text, 0)
        value = self.sum()
        if self.peek() is not None:
            raise OrdinalSyntaxError("trailing input", self.text, self.pos())
        return value

    def sum(self):
        value = self.term()
        while self.peek() == "+":
            pos = self.pos()
            self.take()
            rhs = self.term()
            try:
                value = add(value, rhs)
            except OrdinalRangeError as exc:
                raise OrdinalSyntaxError(str(exc), self.text, pos) from None
        return value

    def term(self):
        pos = self.pos()
        value = self.atom()
        while self.peek() == "*":
            self.take()
            k = self.natural()
            if k == 0:
                raise OrdinalSyntaxError("coefficient must be positive", self.text, pos)
            if value.is_finite:
                value = Ordinal.of(int(value) * k)
            elif len(value.terms) == 1:
                e, c = value.terms[0]
                value = Ordinal(((e, c * k),))
            else:
                raise OrdinalSyntaxError("only single terms take coefficients", self.text, pos)
        return value

    def natural(self):
        tok = self.peek()
        if tok is None or not tok.isdigit():
            raise OrdinalSyntaxError("expected a natural number", self.text, self.pos())
        self.take()
        return int(tok)

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise OrdinalSyntaxError("unexpected end", self.text, self.pos())
        if tok.isdigit():
            return Ordinal.of(self.natural())
        if tok == "e0":
            self.take()
            return EPSILON_ZERO
        if tok == "(":
            self.take()
            value = self.sum()
            self.expect(")")
            return value
        if tok in ("w", "w_"):
            return self.power()
        raise OrdinalSyntaxError(f"unexpected {tok!r}", self.text, self.pos())

    def power(self):
        pos = self.pos()
        tok = self.take()
        if tok == "w_":
            n = self.natural()
            try:
                return omega_tower(n)
            except ResourceLimitError as exc:
                raise OrdinalSyntaxError(str(exc), self.text, pos) from None
        if self.peek() != "^":
            return OMEGA
        self.take()
        tok = self.peek()
        if tok is not None and tok.isdigit():
            exp = Ordinal.of(self.natural())
        elif tok in ("w", "w_"):
            exp = self.power()
        elif tok == "(":
            self.take()
            exp = self.sum()
            self.expect(")")
        elif tok == "e0":
            self.take()
            exp = EPSILON_ZERO
        else:
            raise OrdinalSyntaxError("bad exponent", self.text, self.pos())
        return omega_power(exp)


def parse_ordinal(text: str) -> Ordinal:
    return _OrdinalParser(text).parse()


# --- natural-number codes --------------------------------------------------
# 0 -> 0, epsilon_0 -> 1, w^e*c + rest -> 2 + <<code(e), c-1>, code(rest)>

def _pair(a, b):
    return (a + b) * (a + b + 1) // 2 + b


def _unpair(z):
    # inverse of the Cantor pairing, exact on big integers
    w = (isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def ordinal_code(a: Ordinal) -> int:
    if a.top:
        return 1
    code = 0
    for exp, coef in reversed(a.terms):
        code = 2 + _pair(_pair(ordinal_code(exp), coef - 1), code)
    return code


def ordinal_from_code(n: int) -> Optional[Ordinal]:
    """Decode a natural into an ordinal notation; None outside the image."""
    if n < 0:
        return None
    if n == 0:
        return ZERO
    if n == 1:
        return EPSILON_ZERO
    head, rest_code = _unpair(n - 2)
    exp_code, coef = _unpair(head)
    exp = ordinal_from_code(exp_code)
    rest = ordinal_from_code(rest_code)
    if exp is None or rest is None or exp.top or rest.top:
        return None
    if rest.terms and compare(rest.terms[0][0], exp) != Ordering.LESS:
        return None
    return Ordinal(((exp, coef + 1),) + rest.terms)
