"""Shared fixtures: a small test signature and seeded random generators
for formulas and rule programs over tiny universes.
"""

import random

import pytest

from fsmkit.syntax import (
    And, App, Atom, BOT, Equal, Exists, Forall, Implies, Lit, Not, Or,
    Signature, Var,
)


def small_signature(elements=(1, 2), with_unary_func=False):
    """Sort u over the given elements, object constants a and b, a unary
    predicate p, and a propositional constant q."""
    sig = Signature()
    sig.declare_sort("u", elements)
    sig.declare_func("a", (), "u")
    sig.declare_func("b", (), "u")
    sig.declare_pred("p", ("u",))
    sig.declare_pred("q", ())
    if with_unary_func:
        sig.declare_func("f", ("u",), "u")
    return sig


class FormulaGen:
    """Seeded random closed formulas over a small_signature."""

    def __init__(self, rng, sig, elements):
        self.rng = rng
        self.sig = sig
        self.elements = elements
        self.has_f = "f" in sig.functions
        self.counter = 0

    def term(self, env):
        choices = ["a", "b", "lit"]
        if env:
            choices.append("var")
        if self.has_f:
            choices.append("f")
        kind = self.rng.choice(choices)
        if kind == "lit":
            return Lit(self.rng.choice(self.elements))
        if kind == "var":
            return self.rng.choice(env)
        if kind == "f":
            return App("f", (self.term_flat(env),))
        return App(kind, ())

    def term_flat(self, env):
        # nesting only one level deep keeps grounding cheap
        kind = self.rng.choice(["a", "b", "lit", "var"] if env
                               else ["a", "b", "lit"])
        if kind == "lit":
            return Lit(self.rng.choice(self.elements))
        if kind == "var":
            return self.rng.choice(env)
        return App(kind, ())

    def atom(self, env):
        kind = self.rng.choice(["eq", "p", "q"])
        if kind == "eq":
            return Equal(self.term(env), self.term(env))
        if kind == "p":
            return Atom("p", (self.term(env),))
        return Atom("q", ())

    def formula(self, depth, env=()):
        env = list(env)
        if depth <= 0 or self.rng.random() < 0.3:
            return self.atom(env)
        kind = self.rng.choice(
            ["and", "or", "imp", "not", "forall", "exists"])
        if kind == "not":
            return Not(self.formula(depth - 1, env))
        if kind in ("forall", "exists"):
            self.counter += 1
            v = Var(f"V{self.counter}", "u")
            body = self.formula(depth - 1, env + [v])
            return (Forall if kind == "forall" else Exists)(v, body)
        ctor = {"and": And, "or": Or, "imp": Implies}[kind]
        return ctor(self.formula(depth - 1, env), self.formula(depth - 1, env))


def definition_signature(elements=(1, 2)):
    """Sort u, functions f and g, predicate p: symbols to be defined."""
    sig = Signature()
    sig.declare_sort("u", elements)
    sig.declare_func("f", (), "u")
    sig.declare_func("g", (), "u")
    sig.declare_pred("p", ("u",))
    return sig


def _random_literal(rng, elements, target, earlier, exclude=()):
    """A body literal for a definition of target.  Strictly positive atoms
    only mention earlier symbols, so the dependency graph stays acyclic."""
    pool = ["eq"]
    pool += [("pos", s) for s in earlier]
    pool += [("neg", s) for s in ("f", "g", "p") if s not in exclude]
    kind = rng.choice(pool)
    t = rng.choice([target] + [Lit(e) for e in elements])
    if kind == "eq":
        return Equal(target, Lit(rng.choice(elements)))
    tag, s = kind
    if s == "p":
        atom = Atom("p", (t,))
    else:
        atom = Equal(App(s, ()), t)
    return atom if tag == "pos" else Not(atom)


def random_definition_program(rng, elements=(1, 2)):
    """A random tight program in definitional form: one universally closed
    definition per intensional symbol, bodies ordered to avoid cycles."""
    sig = definition_signature(elements)
    order = ["f", "g", "p"]
    defs = []
    for idx, name in enumerate(order):
        v = Var("V", "u")
        lits = [_random_literal(rng, elements, v, order[:idx],
                                exclude=(name,))
                for _ in range(rng.randint(1, 2))]
        body = lits[0] if len(lits) == 1 else rng.choice([And, Or])(*lits)
        if name == "p":
            head = Atom("p", (v,))
        else:
            head = Equal(App(name, ()), v)
        defs.append(Forall(v, Implies(body, head)))
    f = defs[0]
    for d in defs[1:]:
        f = And(f, d)
    return sig, f


@pytest.fixture
def rng():
    return random.Random(20240817)


def make_gen(seed, elements=(1, 2), with_unary_func=False):
    sig = small_signature(elements, with_unary_func)
    gen = FormulaGen(random.Random(seed), sig, elements)
    return sig, gen
