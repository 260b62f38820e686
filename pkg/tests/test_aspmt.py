"""SMT-LIB emission and model decoding for theories with an arithmetic
background, plus an exact-rational evaluator used as an independent check
of the emitted scripts."""

import itertools
import pathlib
from fractions import Fraction

import pytest

from fsmkit.aspmt import (
    BackgroundTheory, DecodeError, NotATInterpretationError, SmtError,
    decode_model, eliminate_background_quantifiers, emit_smtlib,
    parse_sexprs, solver_path, t_stable_check, validate_smtlib,
)
from fsmkit.interp import FiniteInterpretation, satisfies
from fsmkit.parser import parse_program
from fsmkit.stable import stable_models
from fsmkit.syntax import (
    And, App, Equal, Exists, Forall, FragmentError, Implies, Lit, Not, Or,
    Signature, Var, conj,
)
from fsmkit.transforms import complete, to_clark_normal_form

DEMOS = pathlib.Path(__file__).resolve().parent.parent / "demos"


# ---------------------------------------------------------------------------
# an exact-rational evaluator for the rendered scripts

def eval_sexpr(sx, env):
    if isinstance(sx, str):
        if sx == "true":
            return True
        if sx == "false":
            return False
        try:
            return Fraction(sx)
        except ValueError:
            return env[sx]
    op, args = sx[0], [eval_sexpr(a, env) for a in sx[1:]]
    if op == "+":
        return sum(args)
    if op == "-":
        return -args[0] if len(args) == 1 else args[0] - args[1]
    if op == "*":
        out = Fraction(1)
        for a in args:
            out *= a
        return out
    if op == "/":
        return args[0] / args[1]
    if op == "=":
        return args[0] == args[1]
    if op == "<=":
        return args[0] <= args[1]
    if op == "<":
        return args[0] < args[1]
    if op == ">=":
        return args[0] >= args[1]
    if op == ">":
        return args[0] > args[1]
    if op == "and":
        return all(args)
    if op == "or":
        return any(args)
    if op == "not":
        return not args[0]
    if op == "=>":
        return (not args[0]) or args[1]
    if op == "ite":
        return args[1] if args[0] else args[2]
    raise ValueError(f"unknown operator {op!r}")


def script_holds(script, env):
    return all(eval_sexpr(parse_sexprs(a)[0], env) for a in script.assertions)


# ---------------------------------------------------------------------------
# fixtures

def water_tank():
    prog = parse_program((DEMOS / "watertank.fsm").read_text())
    f = conj(r.as_formula() for r in prog.rules)
    return prog, f


def tank_interp(prog, a0, a1, flush):
    return FiniteInterpretation(
        prog.signature, {"amt": tuple(range(21))},
        funcs={"amt0": {(): a0}, "amt1": {(): a1}},
        preds={"flush": frozenset([()] if flush else [])})


# ---------------------------------------------------------------------------
# the stability check relative to a background

def test_t_stable_check_tank_verdicts():
    prog, f = water_tank()
    bg = BackgroundTheory("integers")
    assert t_stable_check(f, prog.intensional, tank_interp(prog, 5, 6, False), bg)
    assert not t_stable_check(f, prog.intensional, tank_interp(prog, 5, 9, False), bg)
    assert t_stable_check(f, prog.intensional, tank_interp(prog, 5, 0, True), bg)


def test_t_stable_check_rejects_mismatched_slice():
    prog, f = water_tank()
    bg = BackgroundTheory("integers", slice={"amt": tuple(range(5))})
    with pytest.raises(NotATInterpretationError):
        t_stable_check(f, prog.intensional, tank_interp(prog, 5, 6, False), bg)


# ---------------------------------------------------------------------------
# emission

def test_emit_requires_background():
    prog, f = water_tank()
    with pytest.raises(SmtError):
        emit_smtlib(f, prog.intensional, prog.signature,
                    BackgroundTheory("none"))


def test_emission_is_deterministic_and_valid():
    prog, f = water_tank()
    cnf = to_clark_normal_form(f, prog.intensional, prog.signature)
    bg = BackgroundTheory("integers")
    s1 = emit_smtlib(cnf, prog.intensional, prog.signature, bg)
    s2 = emit_smtlib(cnf, prog.intensional, prog.signature, bg)
    assert s1.render() == s2.render()
    assert s1.logic == "QF_LIA"
    assert validate_smtlib(s1.render())


def test_emission_includes_range_guards():
    prog, f = water_tank()
    cnf = to_clark_normal_form(f, prog.intensional, prog.signature)
    script = emit_smtlib(cnf, prog.intensional, prog.signature,
                         BackgroundTheory("integers"))
    assert "(and (<= 0 amt1) (<= amt1 20))" in script.assertions


def test_emitted_tank_models_equal_stable_models():
    """Classical models of the emitted completion, found by exhaustive
    exact-rational evaluation, coincide with the stable models."""
    prog, f = water_tank()
    cnf = to_clark_normal_form(f, prog.intensional, prog.signature)
    script = emit_smtlib(cnf, prog.intensional, prog.signature,
                         BackgroundTheory("integers"))
    expected = {(m.funcs["amt1"][()], bool(m.preds["flush"]))
                for m in stable_models(
                    f, prog.intensional, prog.signature,
                    {"amt": tuple(range(21))},
                    fixed_funcs={"amt0": {(): 5}})}
    got = set()
    for a1, flush in itertools.product(range(21), (False, True)):
        env = {"amt0": Fraction(5), "amt1": Fraction(a1), "flush": flush}
        if script_holds(script, env):
            got.add((a1, flush))
    assert got == expected


def test_car_script_is_quantifier_free_and_valid():
    prog = parse_program((DEMOS / "car.fsm").read_text())
    f = conj(r.as_formula() for r in prog.rules)
    cnf = to_clark_normal_form(f, prog.intensional, prog.signature)
    script = emit_smtlib(cnf, prog.intensional, prog.signature,
                         BackgroundTheory("reals"))
    assert script.logic == "QF_NRA"
    text = script.render()
    assert validate_smtlib(text)
    assert "forall" not in text and "exists" not in text
    # emission is reproducible byte for byte
    script2 = emit_smtlib(cnf, prog.intensional, prog.signature,
                          BackgroundTheory("reals"))
    assert script2.render() == text


def test_quantifier_elimination_on_guarded_bodies():
    sig = Signature()
    sig.declare_sort("t", (0, 1))
    sig.declare_func("speed", (), "real", tag="user")
    x = Var("X", "real")
    f = Forall(x, Implies(Equal(App("speed", ()), x),
                          Implies(Equal(x, Lit(3)), Equal(App("speed", ()), x))))
    out = eliminate_background_quantifiers(f)
    assert not isinstance(out, (Forall, Exists))


# ---------------------------------------------------------------------------
# decoding

def test_decode_model_round_trip():
    prog, f = water_tank()
    cnf = to_clark_normal_form(f, prog.intensional, prog.signature)
    bg = BackgroundTheory("integers")
    script = emit_smtlib(cnf, prog.intensional, prog.signature, bg)
    text = """sat
(model
  (define-fun amt0 () Int 5)
  (define-fun amt1 () Int 6)
  (define-fun flush () Bool false)
)"""
    i = decode_model(text, script, prog.signature, bg)
    assert i.funcs["amt0"][()] == 5
    assert i.funcs["amt1"][()] == 6
    assert i.preds["flush"] == frozenset()


def test_decode_model_reports_missing_symbols():
    prog, f = water_tank()
    cnf = to_clark_normal_form(f, prog.intensional, prog.signature)
    bg = BackgroundTheory("integers")
    script = emit_smtlib(cnf, prog.intensional, prog.signature, bg)
    with pytest.raises(DecodeError):
        decode_model("sat\n(model (define-fun amt0 () Int 5))",
                     script, prog.signature, bg)


def test_parse_sexprs_rejects_unbalanced_text():
    with pytest.raises(DecodeError):
        parse_sexprs("(define-fun amt0 () Int 5")


def test_validate_smtlib_rejects_junk():
    with pytest.raises(DecodeError):
        validate_smtlib("(assert (= a b)")
    with pytest.raises(SmtError):
        validate_smtlib("")
    with pytest.raises(SmtError):
        validate_smtlib("(frobnicate x)")


def test_solver_path_honours_environment(monkeypatch):
    monkeypatch.delenv("FSMKIT_SOLVER", raising=False)
    assert solver_path() is None
    assert solver_path("z3") == "z3"
    monkeypatch.setenv("FSMKIT_SOLVER", "/some/solver")
    assert solver_path() == "/some/solver"
