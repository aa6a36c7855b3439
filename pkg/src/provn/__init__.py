"""Theories extended by reflection, their normal forms and ordinal measures."""
from .ordinal import Ordinal, parse_ordinal, format_ordinal
from .formula import Formula, Term, classify
from .syntax import parse_formula, parse_term, show
from .godel import encode, decode
from .semantics import Verdict, evaluate
from .theory import parse_theory, show_theory
from .algebra import normalize, sigma_ordinal, pi1_ordinal, prove_inclusion, conservation_equiv

__version__ = "0.1.0"
