"""Command implementations shared by the command line and the HTTP service.

Every command returns a :class:`Report`: an exit status (0 success, 2 the
engine says no or does not know, 1 bad input), a plain-text rendering, and a
JSON-ready dict carrying ``schema_version``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import algebra
from .arithmetization import (
    Con, LocalRfn, UniformRFN, build_box, build_n_provability, build_schema_instance,
    iterated_numeration, sigma_ea,
)
from .formula import classify, free_vars, parse_class, Sigma
from .godel import encode
from .ordinal import OrdinalSyntaxError, format_ordinal, parse_ordinal
from .semantics import EvaluationError, enumerate_axioms, evaluate
from .syntax import FormulaSyntaxError, format_nat, parse_formula, parse_nat, show
from .theory import (
    EA, ConIter, RFNIter, RfnIter, TheorySyntaxError, parse_theory, show_theory, to_json,
)

SCHEMA_VERSION = "1"
OK, INPUT_ERROR, NO = 0, 1, 2
COMMANDS = ("normalize", "ordinal", "includes", "conserves", "emit", "axioms", "eval")


@dataclass(frozen=True)
class Report:
    exit_code: int
    text: str
    data: dict = field(default_factory=dict)


class InputError(ValueError):
    pass


def _report(command, exit_code, text, **data):
    status = {OK: "ok", NO: "no", INPUT_ERROR: "error"}[exit_code]
    payload = {"schema_version": SCHEMA_VERSION, "command": command, "status": status}
    payload.update(data)
    return Report(exit_code, text, payload)


def _theory(text):
    return parse_theory(text)


def normalize(expr: str) -> Report:
    e = _theory(expr)
    try:
        nf = algebra.normalize(e)
    except algebra.CannotNormalize as exc:
        return _report("normalize", NO, str(exc), input=show_theory(e), result=None, reason=str(exc))
    return _report("normalize", OK, str(nf), input=show_theory(e), result=str(nf),
                   tree=to_json(nf.expr), finitely_axiomatizable=nf.finitely_axiomatizable,
                   provenance=list(nf.provenance))


def ordinal(expr: str, measure: str = "pi1") -> Report:
    e = _theory(expr)
    if measure == "pi1":
        value = algebra.pi1_ordinal(e)
    elif measure.startswith("sigma:") and measure[6:].isdigit() and int(measure[6:]) >= 2:
        value = algebra.sigma_ordinal(e, int(measure[6:]))
    else:
        raise InputError(f"unknown measure {measure!r}: use pi1 or sigma:k with k >= 2 at position 0")
    if value is None:
        return _report("ordinal", NO, "unknown", input=show_theory(e), measure=measure, result=None)
    text = format_ordinal(value)
    return _report("ordinal", OK, text, input=show_theory(e), measure=measure, result=text)


def includes(a: str, b: str) -> Report:
    ea, eb = _theory(a), _theory(b)
    d = algebra.prove_inclusion(ea, eb)
    if isinstance(d, algebra.NotDerivable):
        return _report("includes", NO, str(d), a=show_theory(ea), b=show_theory(eb), derivation=None)
    return _report("includes", OK, "\n".join(["derivable"] + d.lines()),
                   a=show_theory(ea), b=show_theory(eb), derivation=d.to_dict())


def conserves(a: str, b: str, cls: str = "Pi1") -> Report:
    ea, eb = _theory(a), _theory(b)
    try:
        fc = parse_class(cls)
    except ValueError as exc:
        raise InputError(f"{exc} at position 0") from None
    r = algebra.conservation_equiv(ea, eb, fc)
    common = dict(a=show_theory(ea), b=show_theory(eb), formula_class=str(fc))
    if isinstance(r, algebra.Derivation):
        return _report("conserves", OK, "\n".join(["derivable"] + r.lines()),
                       derivation=r.to_dict(), **common)
    return _report("conserves", NO, str(r), derivation=None, **common)


def numeration_for(e):
    """The numeration of a theory expression: EA or a progression stage over EA."""
    if e == EA:
        return sigma_ea()
    if isinstance(e, (RfnIter, RFNIter, ConIter)) and e.base == EA:
        if isinstance(e, RfnIter):
            kind = LocalRfn(e.level, Sigma(e.sigma) if e.sigma else None)
        elif isinstance(e, RFNIter):
            if e.sigma is None:
                raise InputError("uniform reflection needs a class {Sigma k} at position 0")
            kind = UniformRFN(e.sigma)
        else:
            kind = Con()
        return iterated_numeration(sigma_ea(), kind).stage(e.stage)
    raise InputError(f"no numeration for {show_theory(e)}: use EA or a progression over EA at position 0")


def _schema_kind(spec: str):
    # rfn, rfn<n>, rfn<n>:Sigma<k>, RFN<k>, con
    if spec == "con":
        return Con()
    if spec.startswith("RFN") and spec[3:].isdigit():
        return UniformRFN(int(spec[3:]))
    if spec.startswith("rfn"):
        level, _, cls = spec[3:].partition(":")
        if level == "" or level.isdigit():
            return LocalRfn(int(level or 0), parse_class(cls) if cls else None)
    raise InputError(f"unknown schema {spec!r} at position 0")


def emit(kind: str, theory: str, target: str) -> Report:
    e = _theory(theory)
    phi = parse_formula(target)
    nu = numeration_for(e)
    if kind == "box":
        f = build_box(nu, phi)
    elif kind.startswith("nprov:") and kind[6:].isdigit() and int(kind[6:]) >= 1:
        f = build_n_provability(nu, int(kind[6:]), phi)
    elif kind == "schema" or kind.startswith("schema:"):
        f = build_schema_instance(_schema_kind(kind[7:] or "rfn0"), nu, phi)
    else:
        raise InputError(f"unknown emit kind {kind!r}: use box, nprov:n or schema[:kind] at position 0")
    cls = str(classify(f))
    text = "\n".join([
        f"numeration: {nu.name} ({nu.godel.bit_length()}-bit code)",
        f"class: {cls}",
        f"formula: {show(f)}",
    ])
    return _report("emit", OK, text, numeration=nu.record(), formula=show(f),
                   formula_class=cls, code=format_nat(encode(f)))


def axioms(expr: str, stage: str = None, max_code: int = 1000, fuel: int = 10_000,
           candidates=()) -> Report:
    e = _theory(expr)
    if stage is not None:
        alpha = parse_ordinal(stage)
        if not isinstance(e, (RfnIter, RFNIter, ConIter)):
            raise InputError("--stage applies to progressions such as Rfn(EA)@0 at position 0")
        e = type(e)(*[alpha if f == "stage" else getattr(e, f) for f in e.__dataclass_fields__])
    nu = numeration_for(e)
    cands = [parse_nat(c) if isinstance(c, str) else int(c) for c in candidates]
    result = enumerate_axioms(nu, None, max_code, fuel, cands)
    codes = [format_nat(c) for c in result.codes]
    lines = [f"theory: {show_theory(e)}",
             f"codes: {', '.join(codes) if codes else '(none)'}",
             f"complete: {'yes' if result.complete else 'no'}"]
    if result.unknown:
        lines.append(f"unknown: {', '.join(format_nat(c) for c in result.unknown)}")
    return _report("axioms", OK if result.complete else NO, "\n".join(lines),
                   theory=show_theory(e), max_code=max_code, codes=codes,
                   complete=result.complete, unknown=[format_nat(c) for c in result.unknown])


def eval_sentence(sentence: str, fuel: int = 100_000, qbound: int = 100) -> Report:
    f = parse_formula(sentence)
    if free_vars(f):
        raise InputError("eval needs a sentence, found free variables at position 0")
    if fuel <= 0 or qbound <= 0:
        raise InputError("fuel and qbound must be positive at position 0")
    v = evaluate(f, fuel=fuel, qbound=qbound)
    return _report("eval", OK if v.exact else NO, str(v), sentence=show(f),
                   value=v.value, exact=v.exact, reason=v.reason)


_DISPATCH = {
    "normalize": normalize, "ordinal": ordinal, "includes": includes, "conserves": conserves,
    "emit": emit, "axioms": axioms, "eval": eval_sentence,
}

INPUT_ERRORS = (InputError, TheorySyntaxError, FormulaSyntaxError, OrdinalSyntaxError,
                EvaluationError, ValueError)


def run(command: str, **args) -> Report:
    """Run a command by name; bad input becomes an exit-1 report, never an exception."""
    fn = _DISPATCH.get(command)
    if fn is None:
        return _report(command, INPUT_ERROR, f"error: unknown command {command!r}",
                       error=f"unknown command {command!r}")
    try:
        return fn(**args)
    except INPUT_ERRORS as exc:
        return _report(command, INPUT_ERROR, f"error: {exc}", error=str(exc))
