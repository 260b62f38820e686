"""Background theories, bounded background-restricted stable checking, and
SMT-LIB compilation of completed tight theories.

The compile strategy targets finite-domain front ends over an integer or
real background: quantifiers over finite sorts are expanded, function
applications over finite argument tuples become per-tuple SMT constants,
and residual background-sort quantifiers are eliminated where an equality
guard determines the variable (the Speed(1) = y pattern), otherwise
emitted as SMT quantifiers.
"""

from __future__ import annotations

import os
import re
import subprocess
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from .syntax import (
    And, App, Atom, ARITH_FUNCS, BOOL, BOT, Bottom, COMPARE_PREDS, Equal,
    Exists, Forall, Formula, FragmentError, FsmError, INT, Implies, Lit, Not,
    Obj, Or, REAL, Signature, TAG_USER, TOP, Var, as_clist, conj, conjuncts,
    free_vars, is_not, subst,
)
from .interp import FiniteInterpretation
from .stable import check_stable, METHOD_REDUCT
from .transforms import complete, find_cycle, dependency_graph, is_clark_normal_form


class NotATInterpretationError(FsmError):
    pass


class SmtError(FsmError):
    pass


KIND_INTEGERS = "integers"
KIND_REALS = "reals"
KIND_NONE = "none"


@dataclass
class BackgroundTheory:
    """A fixed arithmetic background with an optional bounded slice used by
    the enumeration-based checker (maps a builtin sort to a finite tuple of
    values)."""
    kind: str = KIND_NONE
    slice: dict = field(default_factory=dict)

    def numeric_smt_sort(self):
        if self.kind == KIND_REALS:
            return "Real"
        if self.kind == KIND_INTEGERS:
            return "Int"
        raise SmtError("no numeric background declared")


def _check_t_interpretation(i: FiniteInterpretation, c):
    """Reject interpretations that try to override background symbols."""
    for name in list(i.funcs):
        if name in ARITH_FUNCS or re.fullmatch(r"-?\d+", name):
            raise NotATInterpretationError(
                f"interpretation overrides the background symbol {name!r}")
    for name in list(i.preds):
        if name in COMPARE_PREDS:
            raise NotATInterpretationError(
                f"interpretation overrides the background symbol {name!r}")
    for name in c:
        if name in ARITH_FUNCS or name in COMPARE_PREDS:
            raise NotATInterpretationError(
                f"background symbol {name!r} cannot be intensional")


def t_stable_check(f: Formula, c, i: FiniteInterpretation,
                   bg: BackgroundTheory, method=METHOD_REDUCT) -> bool:
    """Stable-model check restricted to interpretations that agree with the
    arithmetic background; witnesses vary only the listed constants, so the
    background stays fixed throughout."""
    c = as_clist(c)
    _check_t_interpretation(i, c)
    if bg.slice:
        for s, ext in bg.slice.items():
            got = i.universe.get(s)
            if got is not None and tuple(got) != tuple(ext):
                raise NotATInterpretationError(
                    f"interpretation universe disagrees with the slice on {s!r}")
            if got is None:
                i = FiniteInterpretation(i.signature,
                                         {**i.universe, s: tuple(ext)},
                                         dict(i.funcs), dict(i.preds))
    return check_stable(f, c, i, method)


# ---------------------------------------------------------------------------
# SMT-LIB scripts

@dataclass
class SmtScript:
    logic: str
    declarations: list = field(default_factory=list)   # (name, smt_sort)
    assertions: list = field(default_factory=list)     # sexpr strings
    footer: tuple = ("(check-sat)", "(get-model)")
    symbol_map: dict = field(default_factory=dict)     # smt name -> origin info

    def render(self) -> str:
        lines = [f"(set-logic {self.logic})"]
        for name, sort in self.declarations:
            lines.append(f"(declare-const {name} {sort})")
        for a in self.assertions:
            lines.append(f"(assert {a})")
        lines.extend(self.footer)
        return "\n".join(lines) + "\n"


def _simplify_not_not(f):
    inner = is_not(f)
    if inner is not None:
        inner2 = is_not(inner)
        if inner2 is not None:
            return _simplify_not_not(inner2)
        return Not(_simplify_not_not(inner))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_simplify_not_not(f.left), _simplify_not_not(f.right))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _simplify_not_not(f.body))
    return f


def _finite_extent(sig: Signature, sort, bg: BackgroundTheory):
    if sort == BOOL:
        return (False, True)
    if sort in bg.slice:
        return tuple(bg.slice[sort])
    decl = sig.sorts.get(sort)
    if decl is not None and decl.elements is not None:
        return decl.elements
    return None


def _element_term(e):
    if isinstance(e, bool) or isinstance(e, (int, Fraction)):
        return Lit(e)
    return Obj(e)


def _expand_finite_quantifiers(f, sig, bg):
    if isinstance(f, (Forall, Exists)):
        ext = _finite_extent(sig, f.var.sort, bg)
        if ext is not None:
            parts = [_expand_finite_quantifiers(
                subst(f.body, {f.var: _element_term(e)}), sig, bg) for e in ext]
            if isinstance(f, Forall):
                return conj(parts)
            out = parts[0]
            for p in parts[1:]:
                out = Or(out, p)
            return out
        return type(f)(f.var, _expand_finite_quantifiers(f.body, sig, bg))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_expand_finite_quantifiers(f.left, sig, bg),
                       _expand_finite_quantifiers(f.right, sig, bg))
    return f


def _guard_term(cj, y):
    """If cj is an equality determining y, the defining term, else None."""
    if not isinstance(cj, Equal):
        return None
    if cj.left == y and y not in free_vars(cj.right):
        return cj.right
    if cj.right == y and y not in free_vars(cj.left):
        return cj.left
    return None


def _iff_parts(f):
    if isinstance(f, And) and isinstance(f.left, Implies) and isinstance(f.right, Implies) \
            and f.left.right != BOT and f.right.right != BOT \
            and f.left.left == f.right.right and f.left.right == f.right.left:
        return f.left, f.right
    return None


_fresh_counter = [0]


def _fresh_var(sort, avoid):
    while True:
        _fresh_counter[0] += 1
        name = f"Q{_fresh_counter[0]}"
        if name not in avoid:
            return Var(name, sort)


def eliminate_background_quantifiers(f):
    """Remove quantifiers over background sorts wherever an equality guard
    pins down the variable; quantifiers that resist elimination remain."""
    if isinstance(f, Exists):
        body = eliminate_background_quantifiers(f.body)
        cs = list(conjuncts(body))
        for idx, cj in enumerate(cs):
            t = _guard_term(cj, f.var)
            if t is not None:
                rest = cs[:idx] + cs[idx + 1:]
                replaced = subst(conj(rest), {f.var: t}) if rest else TOP
                return eliminate_background_quantifiers(replaced)
        return Exists(f.var, body)
    if isinstance(f, Forall):
        y = f.var
        body = f.body
        parts = _iff_parts(body)
        if parts is not None:
            fwd, bwd = parts
            # forall y ((t = y) <-> G): the forward instance plus the guarded
            # reverse implication
            for eq_side, g_side in ((fwd.left, fwd.right), (fwd.right, fwd.left)):
                t = _guard_term(eq_side, y) if isinstance(eq_side, Equal) else None
                if t is not None:
                    inst = subst(g_side, {y: t})
                    rev = Forall(y, Implies(g_side, eq_side))
                    return And(eliminate_background_quantifiers(inst),
                               eliminate_background_quantifiers(rev))
        if isinstance(body, Implies):
            a, b = body.left, body.right
            if isinstance(a, Or):
                return And(
                    eliminate_background_quantifiers(Forall(y, Implies(a.left, b))),
                    eliminate_background_quantifiers(Forall(y, Implies(a.right, b))))
            if isinstance(a, Exists):
                names = {v.name for v in free_vars(b) | free_vars(a)} | {y.name}
                z = _fresh_var(a.var.sort, names)
                inner = subst(a.body, {a.var: z})
                return eliminate_background_quantifiers(
                    Forall(y, Forall(z, Implies(inner, b))))
            cs = list(conjuncts(a))
            for idx, cj in enumerate(cs):
                t = _guard_term(cj, y)
                if t is not None:
                    rest = cs[:idx] + cs[idx + 1:]
                    ante = conj(rest) if rest else None
                    new = Implies(ante, b) if ante is not None else b
                    return eliminate_background_quantifiers(subst(new, {y: t}))
        body2 = eliminate_background_quantifiers(body)
        if body2 != body:
            # the simplified body may expose a guard for y, so retry
            return eliminate_background_quantifiers(Forall(y, body2))
        return Forall(y, body2)
    if isinstance(f, (And, Or, Implies)):
        return type(f)(eliminate_background_quantifiers(f.left),
                       eliminate_background_quantifiers(f.right))
    return f


# ---------------------------------------------------------------------------
# compilation to SMT-LIB text

def _mangle_elem(e):
    if isinstance(e, bool):
        return "true" if e else "false"
    if isinstance(e, int):
        return str(e).replace("-", "m")
    return re.sub(r"[^A-Za-z0-9_]", "_", str(e))


class _Compiler:
    def __init__(self, sig: Signature, bg: BackgroundTheory):
        self.sig = sig
        self.bg = bg
        self.decls = {}        # smt name -> smt sort
        self.symbol_map = {}
        self.guards = {}       # smt name -> guard sexpr
        self.num_sort = bg.numeric_smt_sort()

    # -- elements ----------------------------------------------------------
    def elem_index(self, sort, e):
        ext = _finite_extent(self.sig, sort, self.bg)
        if ext is None:
            raise SmtError(f"sort {sort!r} has no finite extent")
        if all(isinstance(x, int) and not isinstance(x, bool) for x in ext):
            return e
        return list(ext).index(e)

    def num_lit(self, v):
        if isinstance(v, Fraction):
            if self.num_sort != "Real":
                raise SmtError("rational literal in an integer background")
            if v.denominator == 1:
                return self.num_lit(v.numerator)
            if v < 0:
                return f"(- (/ {-v.numerator}.0 {v.denominator}.0))"
            return f"(/ {v.numerator}.0 {v.denominator}.0)"
        if self.num_sort == "Real":
            return f"(- {-v}.0)" if v < 0 else f"{v}.0"
        return f"(- {-v})" if v < 0 else str(v)

    # -- terms -------------------------------------------------------------
    def term(self, t, env):
        """Returns (sexpr, smt sort)."""
        if isinstance(t, Lit):
            if isinstance(t.value, bool):
                return ("true" if t.value else "false"), "Bool"
            return self.num_lit(t.value), self.num_sort
        if isinstance(t, Obj):
            if isinstance(t.elem, bool):
                return ("true" if t.elem else "false"), "Bool"
            if isinstance(t.elem, (int, Fraction)):
                return self.num_lit(t.elem), self.num_sort
            raise SmtError(f"cannot compile raw element {t.elem!r} without its sort")
        if isinstance(t, Var):
            if t.name not in env:
                raise SmtError(f"unbound variable {t.name!r}")
            return t.name, env[t.name]
        if isinstance(t, App):
            if t.fn in ARITH_FUNCS:
                args = [self.term(a, env) for a in t.args]
                return f"({t.fn} {' '.join(a for a, _ in args)})", self.num_sort
            return self.user_func(t, env)
        raise TypeError(f"not a term: {t!r}")

    def user_func(self, t: App, env):
        argsorts, valsort = self.sig.functions[t.fn]
        parts = [t.fn]
        for a, s in zip(t.args, argsorts):
            e = self.ground_elem(a, s, env)
            parts.append(_mangle_elem(e))
        name = "_".join(parts)
        ext = _finite_extent(self.sig, valsort, self.bg)
        if valsort == BOOL:
            smt_sort = "Bool"
        elif ext is not None or self.sig.is_subsort(valsort, REAL):
            smt_sort = self.num_sort
        else:
            raise SmtError(f"value sort {valsort!r} of {t.fn!r} is not compilable")
        self.declare(name, smt_sort, ("func", t.fn,
                                      tuple(self.ground_elem(a, s, env)
                                            for a, s in zip(t.args, argsorts)),
                                      valsort))
        if ext is not None and valsort != BOOL:
            self.guards.setdefault(name, self.range_guard(name, valsort, ext))
        return name, smt_sort

    def ground_elem(self, a, sort, env):
        """A function/predicate argument must be a concrete element."""
        if isinstance(a, Obj):
            return a.elem
        if isinstance(a, Lit):
            return a.value
        if isinstance(a, App) and not a.args:
            # ground arithmetic like 0 + 1 stays symbolic; a plain object
            # constant names an element only through an interpretation, so
            # refuse it here
            raise SmtError(f"argument {a!r} is not a concrete element")
        if isinstance(a, App) and all(isinstance(x, (Lit, Obj)) for x in a.args) \
                and a.fn in ARITH_FUNCS:
            from .interp import eval_term
            return eval_term(None, a)
        raise SmtError(f"argument {a!r} of a compiled symbol was not eliminated")

    def range_guard(self, name, sort, ext):
        if all(isinstance(x, int) and not isinstance(x, bool) for x in ext) \
                and tuple(ext) == tuple(range(ext[0], ext[-1] + 1)):
            lo, hi = ext[0], ext[-1]
            return f"(and (<= {self.num_lit(lo)} {name}) (<= {name} {self.num_lit(hi)}))"
        if all(isinstance(x, (int, Fraction)) and not isinstance(x, bool)
               for x in ext):
            vals = ext
        else:
            # enum sorts are encoded by element index
            vals = range(len(ext))
        alts = " ".join(f"(= {name} {self.num_lit(v)})" for v in vals)
        return f"(or {alts})" if len(ext) > 1 else alts

    def declare(self, name, smt_sort, origin):
        old = self.decls.get(name)
        if old is not None and old != smt_sort:
            raise SmtError(f"name collision on {name!r}")
        self.decls[name] = smt_sort
        self.symbol_map.setdefault(name, origin)

    def _equal_side(self, t, other, env):
        """One side of an equality; a bare named element takes its index
        encoding from the value sort of the opposite side."""
        if isinstance(t, Obj) and isinstance(t.elem, str):
            sort = None
            if isinstance(other, App) and other.fn in self.sig.functions:
                sort = self.sig.functions[other.fn][1]
            elif isinstance(other, Var):
                sort = other.sort
            if sort is not None:
                return self.num_lit(self.elem_index(sort, t.elem)), self.num_sort
        return self.term(t, env)

    # -- formulas ----------------------------------------------------------
    def formula(self, f, env):
        if f == TOP:
            return "true"
        if isinstance(f, Bottom):
            return "false"
        neg = is_not(f)
        if neg is not None:
            return f"(not {self.formula(neg, env)})"
        if isinstance(f, Atom):
            if f.pred in COMPARE_PREDS:
                l, _ = self.term(f.args[0], env)
                r, _ = self.term(f.args[1], env)
                return f"({f.pred} {l} {r})"
            parts = [f.pred]
            argsorts = self.sig.predicates[f.pred]
            elems = []
            for a, s in zip(f.args, argsorts):
                e = self.ground_elem(a, s, env)
                elems.append(e)
                parts.append(_mangle_elem(e))
            name = "_".join(parts)
            self.declare(name, "Bool", ("pred", f.pred, tuple(elems)))
            return name
        if isinstance(f, Equal):
            l, ls = self._equal_side(f.left, f.right, env)
            r, rs = self._equal_side(f.right, f.left, env)
            if (ls == "Bool") != (rs == "Bool"):
                raise SmtError(f"boolean/numeric mismatch in {f!r}")
            return f"(= {l} {r})"
        if isinstance(f, And):
            return f"(and {self.formula(f.left, env)} {self.formula(f.right, env)})"
        if isinstance(f, Or):
            return f"(or {self.formula(f.left, env)} {self.formula(f.right, env)})"
        if isinstance(f, Implies):
            return f"(=> {self.formula(f.left, env)} {self.formula(f.right, env)})"
        if isinstance(f, (Forall, Exists)):
            v = f.var
            if not self.sig.is_subsort(v.sort, REAL) and v.sort not in (INT, REAL):
                raise SmtError(f"residual quantifier over non-background sort {v.sort!r}")
            q = "forall" if isinstance(f, Forall) else "exists"
            body = self.formula(f.body, {**env, v.name: self.num_sort})
            return f"({q} (({v.name} {self.num_sort})) {body})"
        raise TypeError(f"not a formula: {f!r}")


def _has_quantifier(sexprs):
    return any("(forall " in s or "(exists " in s for s in sexprs)


def emit_smtlib(f: Formula, c, sig: Signature, bg: BackgroundTheory,
                logic=None) -> SmtScript:
    """Compile a completed tight theory to an SMT-LIB script.

    Accepts either a theory in definitional normal form (it is then checked
    for tightness and completed) or an already-completed formula.
    """
    c = as_clist(c)
    if bg.kind == KIND_NONE:
        raise SmtError("SMT emission needs an integer or real background")
    if is_clark_normal_form(f, c, sig):
        cycle = find_cycle(dependency_graph(f, c))
        if cycle is not None:
            raise FragmentError(
                "theory is not tight; dependency cycle: " + " -> ".join(cycle))
        f = complete(f, c, sig)
    f = _simplify_not_not(f)
    f = _expand_finite_quantifiers(f, sig, bg)
    f = eliminate_background_quantifiers(f)

    comp = _Compiler(sig, bg)
    assertions = []
    for item in conjuncts(f):
        if item == TOP:
            continue
        assertions.append(comp.formula(item, {}))
    guard_assertions = [comp.guards[n] for n in comp.decls if n in comp.guards]
    all_assertions = guard_assertions + assertions
    if logic is None:
        quantified = _has_quantifier(all_assertions)
        if bg.kind == KIND_REALS:
            logic = "NRA" if quantified else "QF_NRA"
        else:
            logic = "LIA" if quantified else "QF_LIA"
    return SmtScript(logic=logic,
                     declarations=sorted(comp.decls.items()),
                     assertions=all_assertions,
                     symbol_map=comp.symbol_map)


# ---------------------------------------------------------------------------
# model decoding

class DecodeError(FsmError):
    pass


def _sexpr_tokens(text):
    for m in re.finditer(r"\(|\)|[^\s()]+", text):
        yield m.group()


def parse_sexprs(text):
    stack = [[]]
    for tok in _sexpr_tokens(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) < 2:
                raise DecodeError("unbalanced parentheses in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise DecodeError("unbalanced parentheses in solver output")
    return stack[0]


def _value_of(sx):
    if isinstance(sx, list):
        if len(sx) == 2 and sx[0] == "-":
            return -_value_of(sx[1])
        if len(sx) == 3 and sx[0] == "/":
            return Fraction(_value_of(sx[1])) / Fraction(_value_of(sx[2]))
        raise DecodeError(f"unrecognized value {sx!r}")
    if sx == "true":
        return True
    if sx == "false":
        return False
    if re.fullmatch(r"-?\d+", sx):
        return int(sx)
    if re.fullmatch(r"-?\d+\.\d+", sx):
        return Fraction(sx)
    raise DecodeError(f"unrecognized value {sx!r}")


def decode_model(text: str, script: SmtScript, sig: Signature,
                 bg: BackgroundTheory) -> FiniteInterpretation:
    """Turn a get-model response back into a finite interpretation over the
    declared slice."""
    top = parse_sexprs(text)
    defs = {}
    def walk(sx):
        if isinstance(sx, list):
            if len(sx) >= 5 and sx[0] == "define-fun":
                defs[sx[1]] = _value_of(sx[4])
            else:
                for child in sx:
                    walk(child)
    for sx in top:
        walk(sx)

    funcs, preds = {}, {}
    universe = {s: tuple(ext) for s, ext in bg.slice.items()}
    for s, decl in sig.sorts.items():
        if decl.elements is not None:
            universe.setdefault(s, decl.elements)
    for name, _ in script.declarations:
        if name not in defs:
            raise DecodeError(f"model is missing {name!r}")
    for name, origin in script.symbol_map.items():
        if name not in defs:
            raise DecodeError(f"model is missing {name!r}")
        v = defs[name]
        if origin[0] == "pred":
            _, p, args = origin
            if not isinstance(v, bool):
                raise DecodeError(f"expected a boolean for {name!r}")
            if v:
                preds.setdefault(p, set()).add(args)
            else:
                preds.setdefault(p, set())
        else:
            _, fn, args, valsort = origin
            ext = _finite_extent(sig, valsort, bg)
            if isinstance(v, Fraction) and v.denominator == 1 \
                    and bg.kind == KIND_INTEGERS:
                v = int(v)
            if ext is not None:
                if valsort != BOOL and not all(
                        isinstance(x, int) and not isinstance(x, bool) for x in ext):
                    v = list(ext)[int(v)]
                elif v not in ext:
                    raise DecodeError(
                        f"value {v!r} of {name!r} outside the sort {valsort!r}")
            funcs.setdefault(fn, {})[args] = v
    preds = {p: frozenset(ts) for p, ts in preds.items()}
    return FiniteInterpretation(sig, universe, funcs, preds)


# ---------------------------------------------------------------------------
# grammar validation

_SYMBOL = r"[A-Za-z~!@$%^&*+=<>.?/_-][A-Za-z0-9~!@$%^&*+=<>.?/_-]*"
_COMMANDS = {"set-logic", "set-option", "set-info", "declare-const",
             "declare-fun", "declare-sort", "define-fun", "assert",
             "check-sat", "get-model", "exit", "push", "pop"}


def validate_smtlib(text: str) -> bool:
    """A structural check of SMT-LIB v2 script text: balanced forms, known
    commands at top level, and lexically valid atoms."""
    forms = parse_sexprs(text)
    if not forms:
        raise SmtError("empty script")

    def check_atoms(sx):
        if isinstance(sx, list):
            for child in sx:
                check_atoms(child)
            return
        if re.fullmatch(r"-?\d+(\.\d+)?", sx):
            return
        if re.fullmatch(_SYMBOL, sx) or re.fullmatch(r":[A-Za-z-]+", sx) \
                or re.fullmatch(r"\|[^|]*\|", sx) or re.fullmatch(r'"[^"]*"', sx):
            return
        raise SmtError(f"lexically invalid token {sx!r}")

    for form in forms:
        if not isinstance(form, list) or not form:
            raise SmtError(f"top-level atom {form!r} is not a command")
        if form[0] not in _COMMANDS:
            raise SmtError(f"unknown command {form[0]!r}")
        check_atoms(form)
    return True


# ---------------------------------------------------------------------------
# optional external solver

def solver_path(explicit=None):
    return explicit or os.environ.get("FSMKIT_SOLVER") or None


def run_solver(script: SmtScript, solver=None, timeout_ms=60000):
    """Run the configured solver on a script; returns (status, model_text).

    status is "sat", "unsat", or "unknown"; model_text is the raw response
    after the status line (empty unless sat)."""
    path = solver_path(solver)
    if path is None:
        raise SmtError("no solver configured (set FSMKIT_SOLVER or --solver)")
    with tempfile.NamedTemporaryFile("w", suffix=".smt2", delete=False) as fh:
        fh.write(script.render())
        fname = fh.name
    try:
        out = subprocess.run([path, fname], capture_output=True, text=True,
                             timeout=timeout_ms / 1000.0)
    finally:
        os.unlink(fname)
    lines = out.stdout.strip().splitlines()
    if not lines:
        raise SmtError(f"solver produced no output: {out.stderr.strip()}")
    status = lines[0].strip()
    if status not in ("sat", "unsat", "unknown"):
        raise SmtError(f"unexpected solver status {status!r}")
    return status, "\n".join(lines[1:])


def solve_all(script: SmtScript, sig: Signature, bg: BackgroundTheory,
              solver=None, timeout_ms=60000, limit=10000):
    """Enumerate models by iteratively blocking previous assignments of the
    declared constants.  Only usable when every constant ranges over a
    finite set (guards pin the integers; booleans are finite)."""
    models = []
    blocked = []
    for _ in range(limit):
        s = SmtScript(script.logic, list(script.declarations),
                      list(script.assertions) + blocked,
                      script.footer, dict(script.symbol_map))
        status, model_text = run_solver(s, solver, timeout_ms)
        if status == "unsat":
            return models
        if status == "unknown":
            raise SmtError("solver returned unknown")
        interp = decode_model(model_text, script, sig, bg)
        models.append(interp)
        top = parse_sexprs(model_text)
        defs = {}
        def walk(sx):
            if isinstance(sx, list):
                if len(sx) >= 5 and sx[0] == "define-fun":
                    defs[sx[1]] = sx[4]
                else:
                    for child in sx:
                        walk(child)
        for sx in top:
            walk(sx)
        eqs = []
        for name, _ in script.declarations:
            raw = defs.get(name)
            if raw is None:
                continue
            rendered = raw if isinstance(raw, str) else _render_sexpr(raw)
            eqs.append(f"(= {name} {rendered})")
        blocked.append(f"(not (and {' '.join(eqs)}))")
    raise SmtError("model enumeration limit exceeded")


def _render_sexpr(sx):
    if isinstance(sx, list):
        return "(" + " ".join(_render_sexpr(c) for c in sx) + ")"
    return sx
