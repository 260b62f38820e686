"""Grounding, reduct, the star construction, and two stable-model checkers.

The two checkers realize the same semantics by different routes:

* ``method="reduct"``: ground the sentence over the interpretation's finite
  universe, take the reduct relative to I, and search for a smaller witness J.
* ``method="second-order"``: build the star transform F*(d) over mirror
  constants d and test the defining second-order condition directly by
  enumerating candidate witness assignments for d.

Their agreement is a continuously-audited invariant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .syntax import (
    And, App, Atom, BOT, Bottom, Equal, Exists, Forall, Formula, FsmError,
    Implies, Lit, Obj, Or, Signature, Var, as_clist, free_vars,
    rename_symbols, subst,
)
from .interp import (
    COMPARE_PREDS, UNDEF, FiniteInterpretation, _compare, enumerate_interpretations,
    eval_term, less_on_c, satisfies, vary_on,
)


# ---------------------------------------------------------------------------
# ground formulas (finite specialization of infinitary ground formulas)

@dataclass(frozen=True)
class GBot:
    def __repr__(self):
        return "false"


GBOT = GBot()


@dataclass(frozen=True)
class GAtom:
    pred: str
    args: tuple = ()

    def __repr__(self):
        return f"{self.pred}({', '.join(map(repr, self.args))})" if self.args else self.pred


@dataclass(frozen=True)
class GEqual:
    left: object
    right: object

    def __repr__(self):
        return f"({self.left!r} = {self.right!r})"


@dataclass(frozen=True)
class GAnd:
    members: frozenset

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.members)) + "}&"


@dataclass(frozen=True)
class GOr:
    members: frozenset

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.members)) + "}|"


@dataclass(frozen=True)
class GImp:
    left: object
    right: object

    def __repr__(self):
        return f"({self.left!r} -> {self.right!r})"


def gand(members) -> GAnd:
    return GAnd(frozenset(members))


def gor(members) -> GOr:
    return GOr(frozenset(members))


def ground(f: Formula, interp: FiniteInterpretation, env=None):
    """Structure-preserving grounding of a sentence relative to interp.

    Quantifiers become finite set-conjunctions/disjunctions over the
    variable's sort extent, with object names substituted for the variable.
    Ground terms are kept intact (only variables are replaced).
    """
    env = env or {}
    if free_vars(f) - set(env):
        raise FsmError(f"ground: free variables in {f!r}")

    def g_term(t):
        if isinstance(t, Var):
            return Obj(env[t])
        if isinstance(t, App):
            return App(t.fn, tuple(g_term(a) for a in t.args))
        return t

    if isinstance(f, Bottom):
        return GBOT
    if isinstance(f, Atom):
        return GAtom(f.pred, tuple(g_term(a) for a in f.args))
    if isinstance(f, Equal):
        return GEqual(g_term(f.left), g_term(f.right))
    if isinstance(f, And):
        return gand([ground(f.left, interp, env), ground(f.right, interp, env)])
    if isinstance(f, Or):
        return gor([ground(f.left, interp, env), ground(f.right, interp, env)])
    if isinstance(f, Implies):
        return GImp(ground(f.left, interp, env), ground(f.right, interp, env))
    if isinstance(f, Forall):
        return gand([ground(f.body, interp, {**env, f.var: e})
                     for e in interp.extent(f.var.sort)])
    if isinstance(f, Exists):
        return gor([ground(f.body, interp, {**env, f.var: e})
                    for e in interp.extent(f.var.sort)])
    raise TypeError(f"not a formula: {f!r}")


def gsat(interp: FiniteInterpretation, g) -> bool:
    """Satisfaction of ground formulas."""
    if isinstance(g, GBot):
        return False
    if isinstance(g, GAtom):
        vals = [eval_term(interp, a) for a in g.args]
        if any(v is UNDEF for v in vals):
            return False
        if g.pred in COMPARE_PREDS:
            return _compare(g.pred, *vals)
        return tuple(vals) in interp.preds.get(g.pred, frozenset())
    if isinstance(g, GEqual):
        lv, rv = eval_term(interp, g.left), eval_term(interp, g.right)
        if lv is UNDEF or rv is UNDEF:
            return False
        if isinstance(lv, bool) != isinstance(rv, bool):
            return False
        return lv == rv
    if isinstance(g, GAnd):
        return all(gsat(interp, m) for m in g.members)
    if isinstance(g, GOr):
        return any(gsat(interp, m) for m in g.members)
    if isinstance(g, GImp):
        return (not gsat(interp, g.left)) or gsat(interp, g.right)
    raise TypeError(f"not a ground formula: {g!r}")


def reduct(g, interp: FiniteInterpretation):
    """Reduct relative to interp: false atoms and false implications become
    bottom, everything else is reduced recursively."""
    if isinstance(g, GBot):
        return GBOT
    if isinstance(g, (GAtom, GEqual)):
        return g if gsat(interp, g) else GBOT
    if isinstance(g, GAnd):
        return gand(reduct(m, interp) for m in g.members)
    if isinstance(g, GOr):
        return gor(reduct(m, interp) for m in g.members)
    if isinstance(g, GImp):
        if not gsat(interp, g):
            return GBOT
        return GImp(reduct(g.left, interp), reduct(g.right, interp))
    raise TypeError(f"not a ground formula: {g!r}")


# ---------------------------------------------------------------------------
# the star construction F*(d)

def mirror_names(c, sig: Signature) -> dict:
    """A deterministic fresh mirror name for each member of c."""
    c = as_clist(c)
    taken = set(sig.functions) | set(sig.predicates)
    out = {}
    for n in c:
        m = n + "^"
        while m in taken:
            m += "^"
        taken.add(m)
        out[n] = m
    return out


def star(f: Formula, c, mirrors: dict) -> Formula:
    """F*(d) of the defining recursion; mirrors maps each member of c to a
    fresh similar constant name."""
    c = as_clist(c)
    missing = [n for n in c if n not in mirrors]
    if missing:
        raise FsmError(f"mirror list not similar to c: missing {missing}")

    def go(g):
        if isinstance(g, Bottom):
            return g
        if isinstance(g, (Atom, Equal)):
            return And(rename_symbols(g, mirrors), g)
        if isinstance(g, (And, Or)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, Implies):
            return And(Implies(go(g.left), go(g.right)), g)
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, go(g.body))
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def extend_signature_with_mirrors(sig: Signature, c, mirrors: dict) -> Signature:
    ext = sig.copy()
    for n in as_clist(c):
        m = mirrors[n]
        if n in sig.functions:
            args, val = sig.functions[n]
            ext.declare_func(m, args, val)
        else:
            ext.declare_pred(m, sig.predicates[n])
    return ext


def extended_interpretation(i: FiniteInterpretation, j: FiniteInterpretation,
                            c, mirrors: dict, ext_sig: Signature) -> FiniteInterpretation:
    """The interpretation that agrees with I on the original signature and
    interprets each mirror as J interprets the mirrored constant."""
    funcs = dict(i.funcs)
    preds = dict(i.preds)
    for n in as_clist(c):
        m = mirrors[n]
        if n in i.signature.functions:
            funcs[m] = j.funcs[n]
        else:
            preds[m] = j.preds.get(n, frozenset())
    return FiniteInterpretation(ext_sig, i.universe, funcs, preds)


# ---------------------------------------------------------------------------
# stable-model checking

METHOD_REDUCT = "reduct"
METHOD_SECOND_ORDER = "second-order"


def _witnesses(i: FiniteInterpretation, c):
    """Candidate witnesses J with J <^c I (varying only the symbols in c)."""
    c = as_clist(c)
    for j in vary_on(i, list(c.names)):
        if less_on_c(j, i, c):
            yield j


def check_stable(f: Formula, c, i: FiniteInterpretation,
                 method: str = METHOD_REDUCT) -> bool:
    """Whether I is a stable model of F relative to c."""
    c = as_clist(c)
    if not satisfies(i, f):
        return False
    if method == METHOD_REDUCT:
        red = reduct(ground(f, i), i)
        return not any(gsat(j, red) for j in _witnesses(i, c))
    if method == METHOD_SECOND_ORDER:
        mirrors = mirror_names(c, i.signature)
        ext_sig = extend_signature_with_mirrors(i.signature, c, mirrors)
        starred = star(f, c, mirrors)
        for j in _witnesses(i, c):
            ext = extended_interpretation(i, j, c, mirrors, ext_sig)
            if satisfies(ext, starred):
                return False
        return True
    raise FsmError(f"unknown method {method!r}")


def check_stable_both(f: Formula, c, i: FiniteInterpretation) -> bool:
    """Run both checkers and fail loudly if they ever disagree."""
    a = check_stable(f, c, i, METHOD_REDUCT)
    b = check_stable(f, c, i, METHOD_SECOND_ORDER)
    if a != b:
        raise FsmError(f"stable checker divergence on {f!r}: reduct={a} second-order={b}")
    return a


def stable_models(f: Formula, c, sig: Signature, universe: dict,
                  fixed_funcs=None, fixed_preds=None, vary=None,
                  method: str = METHOD_REDUCT):
    """All stable models of F relative to c over the given finite universe.

    Non-intensional symbols are pinned by the fixed part; intensional ones
    (plus any extra symbols listed in vary) range over all assignments.
    """
    c = as_clist(c)
    if vary is None:
        fixed = set(fixed_funcs or {}) | set(fixed_preds or {})
        vary = [n for n in sig.user_symbols() if n not in fixed]
    out = []
    for i in enumerate_interpretations(sig, universe, fixed_funcs, fixed_preds, vary=vary):
        if check_stable(f, c, i, method):
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# multi-valued propositional stable models

class MvpError(FsmError):
    pass


def mvp_sat(assign: dict, f: Formula) -> bool:
    """Satisfaction of an mvp-formula under an assignment constant -> value.

    Mvp-atoms are written Equal(App(c), Lit(v)) (or Obj/plain value)."""
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Equal):
        c, v = _mvp_atom(f)
        return assign[c] == v
    if isinstance(f, And):
        return mvp_sat(assign, f.left) and mvp_sat(assign, f.right)
    if isinstance(f, Or):
        return mvp_sat(assign, f.left) or mvp_sat(assign, f.right)
    if isinstance(f, Implies):
        return (not mvp_sat(assign, f.left)) or mvp_sat(assign, f.right)
    raise MvpError(f"not an mvp-formula: {f!r}")


def _mvp_atom(f: Equal):
    if isinstance(f.left, App) and not f.left.args:
        c = f.left.fn
    else:
        raise MvpError(f"not an mvp-atom: {f!r}")
    if isinstance(f.right, Lit):
        return c, f.right.value
    if isinstance(f.right, Obj):
        return c, f.right.elem
    raise MvpError(f"not an mvp-atom: {f!r}")


def mvp_reduct(f: Formula, assign: dict) -> Formula:
    """Replace each maximal subformula not satisfied by the assignment with
    bottom."""
    if not mvp_sat(assign, f):
        return BOT
    if isinstance(f, (And, Or, Implies)):
        return type(f)(mvp_reduct(f.left, assign), mvp_reduct(f.right, assign))
    return f


def mvp_stable_check(f: Formula, assign: dict, domains: dict) -> bool:
    """Whether the assignment is the unique mvp-interpretation satisfying
    the reduct of F relative to it."""
    for c, v in assign.items():
        if c not in domains or v not in domains[c]:
            raise MvpError(f"value {v!r} not in the domain of {c!r}")
    red = mvp_reduct(f, assign)
    names = sorted(domains)
    sats = []
    for combo in itertools.product(*[domains[n] for n in names]):
        other = dict(zip(names, combo))
        if mvp_sat(other, red):
            sats.append(other)
            if len(sats) > 1:
                return False
    return sats == [assign]
