"""Stable models with intensional functions over finite structures.

The package provides exact, enumeration-based semantics (two independent
stable-model checkers), syntactic transforms (definitional normal form,
completion, unfolding, sort merging, predicate/function eliminations),
reference oracles for neighbouring formalisms, and an SMT-LIB compiler for
completed tight theories, plus a command-line front end.
"""

from .syntax import (
    And, App, Atom, BOT, Bottom, Choice, Equal, Exists, Forall, Formula,
    FsmError, Iff, Implies, IntensionalList, Lit, Not, Obj, Or, Program,
    Rule, Signature, TOP, Var, fol_representation,
)
from .interp import FiniteInterpretation, enumerate_interpretations, satisfies
from .stable import check_stable, check_stable_both, stable_models
from .transforms import (
    check_strong_equivalence_bounded, complete, is_tight, to_clark_normal_form,
    unfold,
)
from .parser import parse_formula, parse_program, print_formula, print_program

__version__ = "0.1.0"

__all__ = [
    "And", "App", "Atom", "BOT", "Bottom", "Choice", "Equal", "Exists",
    "Forall", "Formula", "FsmError", "Iff", "Implies", "IntensionalList",
    "Lit", "Not", "Obj", "Or", "Program", "Rule", "Signature", "TOP", "Var",
    "FiniteInterpretation", "enumerate_interpretations", "satisfies",
    "check_stable", "check_stable_both", "stable_models",
    "check_strong_equivalence_bounded", "complete", "is_tight",
    "to_clark_normal_form", "unfold", "fol_representation",
    "parse_formula", "parse_program", "print_formula", "print_program",
]
