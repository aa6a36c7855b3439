"""Goedel numbering of terms and formulas.

A code is a base-32 digit stream read as a natural.  Syntax is written in
prefix order, one nonzero digit per symbol; naturals carried by a symbol
(variable indices, literal values, levels, names) are length prefixed: ``k``
tick digits, a stop digit, then the ``k`` base-32 digits of the value.

Every symbol digit is nonzero and every subterm or subformula occupies a
contiguous, strictly shorter run of the stream, so its code is strictly
smaller than the code of the whole.  A literal ``#n`` costs more than
``log_32 n`` digits, hence its code exceeds ``n``.
"""
from __future__ import annotations

from functools import lru_cache

from .formula import (
    Add, All, And, BAll, BEx, Eq, Ex, Exp, Fn, Formula, Imp, Lit, Mul, Not, Or,
    Prf, Rel, Succ, Term, Truth, Var, Zero,
)

VERSION = 1
BASE = 32

ZERO, SUCC, ADD, MUL, EXP, VAR, LIT, FN = 1, 2, 3, 4, 5, 6, 7, 8
EQ, NOT, AND, OR, IMP, ALL, EX, BALL, BEX, PRF, TRUTH, REL = range(9, 21)
TICK, STOP = 30, 31

_DIGITS = "0123456789abcdefghijklmnopqrstuv"
_TO_DIGIT = bytes.maketrans(bytes(range(BASE)), _DIGITS.encode("ascii"))

_TERM_HEAD = {Zero: ZERO, Succ: SUCC, Add: ADD, Mul: MUL, Exp: EXP}
_FORMULA_HEAD = {Eq: EQ, Not: NOT, And: AND, Or: OR, Imp: IMP}


class MalformedCode(ValueError):
    pass


def _digits(n):
    if n == 0:
        return []
    s = bin(n)[2:]
    s = "0" * (-len(s) % 5) + s
    return [int(s[i:i + 5], 2) for i in range(0, len(s), 5)]


def _nat(n, out):
    ds = _digits(n)
    out.extend([TICK] * len(ds))
    out.append(STOP)
    out.extend(ds)


def _name_value(name):
    raw = name.encode("utf-8")
    if not raw:
        raise ValueError("empty name")
    return int.from_bytes(raw, "big")


def tokens(item) -> list:
    out = []
    stack = [item]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            out.append(VAR)
            _nat(x.index, out)
        elif isinstance(x, Lit):
            out.append(LIT)
            _nat(x.value, out)
        elif isinstance(x, (Fn, Rel)):
            out.append(FN if isinstance(x, Fn) else REL)
            _nat(_name_value(x.name), out)
            _nat(len(x.args), out)
            stack.extend(reversed(x.args))
        elif isinstance(x, Succ):
            # numerals are long successor chains: emit them in one step
            k = 0
            while isinstance(x, Succ):
                x, k = x.arg, k + 1
            out.extend([SUCC] * k)
            stack.append(x)
        elif type(x) in _TERM_HEAD:
            out.append(_TERM_HEAD[type(x)])
            if isinstance(x, Exp):
                stack.append(x.arg)
            elif isinstance(x, (Add, Mul)):
                stack.extend((x.right, x.left))
        elif type(x) in _FORMULA_HEAD:
            out.append(_FORMULA_HEAD[type(x)])
            if isinstance(x, Not):
                stack.append(x.body)
            else:
                stack.extend((x.right, x.left))
        elif isinstance(x, (All, Ex)):
            out.append(ALL if isinstance(x, All) else EX)
            _nat(x.var, out)
            stack.append(x.body)
        elif isinstance(x, (BAll, BEx)):
            out.append(BALL if isinstance(x, BAll) else BEX)
            _nat(x.var, out)
            stack.extend((x.body, x.bound))
        elif isinstance(x, Prf):
            out.append(PRF)
            stack.extend((x.target, x.proof, x.numeration))
        elif isinstance(x, Truth):
            out.append(TRUTH)
            _nat(x.level, out)
            stack.append(x.arg)
        else:
            raise TypeError(f"cannot encode {x!r}")
    return out


def encode(item) -> int:
    """Goedel number of a term or formula."""
    return int(bytes(tokens(item)).translate(_TO_DIGIT).decode("ascii"), BASE)


def _read_nat(ds, i):
    k = 0
    while i < len(ds) and ds[i] == TICK:
        k += 1
        i += 1
    if i >= len(ds) or ds[i] != STOP:
        raise MalformedCode("unterminated length prefix")
    i += 1
    if i + k > len(ds):
        raise MalformedCode("truncated payload")
    if k and ds[i] == 0:
        raise MalformedCode("payload with leading zero")
    value = 0
    for d in ds[i:i + k]:
        value = value * BASE + d
    return value, i + k


def _build(kind, head, payload, args):
    if kind == "T":
        if head == ZERO:
            return Zero()
        if head == SUCC:
            return Succ(*args)
        if head == ADD:
            return Add(*args)
        if head == MUL:
            return Mul(*args)
        if head == EXP:
            return Exp(*args)
        if head == FN:
            return Fn(payload, tuple(args))
    if head == EQ:
        return Eq(*args)
    if head == NOT:
        return Not(*args)
    if head == AND:
        return And(*args)
    if head == OR:
        return Or(*args)
    if head == IMP:
        return Imp(*args)
    if head == ALL:
        return All(payload, *args)
    if head == EX:
        return Ex(payload, *args)
    if head == BALL:
        return BAll(payload, *args)
    if head == BEX:
        return BEx(payload, *args)
    if head == PRF:
        return Prf(*args)
    if head == TRUTH:
        return Truth(payload, *args)
    if head == REL:
        return Rel(payload, tuple(args))
    raise MalformedCode(f"symbol {head} is not a {kind}")


_SHAPES = {
    ZERO: ("T", ""), SUCC: ("T", "T"), ADD: ("T", "TT"), MUL: ("T", "TT"),
    EXP: ("T", "T"), EQ: ("F", "TT"), NOT: ("F", "F"), AND: ("F", "FF"),
    OR: ("F", "FF"), IMP: ("F", "FF"), ALL: ("F", "F"), EX: ("F", "F"),
    BALL: ("F", "TF"), BEX: ("F", "TF"), PRF: ("F", "TTT"), TRUTH: ("F", "T"),
}


def _decode_digits(ds, want):
    i = 0
    root = []
    # frames: [kind, head, payload, child_kinds, args]
    frames = [["root", None, None, want, root]]
    while True:
        frame = frames[-1]
        if len(frame[4]) == len(frame[3]):
            frames.pop()
            if frame[0] == "root":
                break
            try:
                value = _build(frame[0], frame[1], frame[2], frame[4])
            except (TypeError, ValueError) as exc:
                raise MalformedCode(str(exc)) from None
            frames[-1][4].append(value)
            continue
        expected = frame[3][len(frame[4])]
        if i >= len(ds):
            raise MalformedCode("truncated code")
        head = ds[i]
        i += 1
        if head == VAR or head == LIT:
            if expected != "T":
                raise MalformedCode("term where a formula was expected")
            n, i = _read_nat(ds, i)
            frame[4].append(Var(n) if head == VAR else Lit(n))
            continue
        if head == FN or head == REL:
            kind = "T" if head == FN else "F"
            if kind != expected:
                raise MalformedCode("kind mismatch")
            name_val, i = _read_nat(ds, i)
            arity, i = _read_nat(ds, i)
            try:
                name = name_val.to_bytes((name_val.bit_length() + 7) // 8, "big").decode("utf-8")
            except UnicodeDecodeError:
                raise MalformedCode("bad name") from None
            if not name:
                raise MalformedCode("empty name")
            frames.append([kind, head, name, "T" * arity, []])
            continue
        if head not in _SHAPES:
            raise MalformedCode(f"unknown symbol {head}")
        kind, children = _SHAPES[head]
        if kind != expected:
            raise MalformedCode("kind mismatch")
        payload = None
        if head in (ALL, EX, BALL, BEX, TRUTH):
            payload, i = _read_nat(ds, i)
        frames.append([kind, head, payload, children, []])
    if i != len(ds):
        raise MalformedCode("trailing digits")
    return root[0]


@lru_cache(maxsize=4096)
def decode(code: int) -> Formula:
    """Inverse of :func:`encode` on formulas; MalformedCode outside the image."""
    if not isinstance(code, int) or code <= 0:
        raise MalformedCode(f"{code!r} is not a formula code")
    return _decode_digits(_digits(code), "F")


@lru_cache(maxsize=4096)
def decode_term(code: int) -> Term:
    if not isinstance(code, int) or code <= 0:
        raise MalformedCode(f"{code!r} is not a term code")
    return _decode_digits(_digits(code), "T")


def try_decode(code: int):
    try:
        return decode(code)
    except MalformedCode:
        return None


def serialize(item) -> bytes:
    """Versioned external form: one version byte, then the code big-endian."""
    code = encode(item)
    return bytes([VERSION]) + code.to_bytes((code.bit_length() + 7) // 8, "big")


def deserialize(data: bytes) -> Formula:
    if not data or data[0] != VERSION:
        raise MalformedCode("unsupported serialization version")
    return decode(int.from_bytes(data[1:], "big"))
