"""Many-sorted signatures, term/formula/rule ASTs, and syntactic analyses.

All AST values are immutable (frozen dataclasses) and hashable, so they can be
shared freely, deduplicated structurally, and used as dict keys.

Negation is represented internally as ``Implies(F, Bottom)``; the printer
re-sugars it.  Choice ``{F}`` is ``Or(F, Not(F))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

# ---------------------------------------------------------------------------
# errors

class FsmError(Exception):
    """Base class for all fsmkit errors."""


class DeclarationError(FsmError):
    pass


class SortError(FsmError):
    pass


class ContractViolation(FsmError):
    pass


class FragmentError(FsmError):
    """Input is outside the syntactic fragment an operation supports."""


# ---------------------------------------------------------------------------
# builtin vocabulary

INT = "int"
REAL = "real"
BOOL = "bool"
BUILTIN_SORTS = (INT, REAL, BOOL)

ARITH_FUNCS = ("+", "-", "*", "/")
COMPARE_PREDS = ("<", "<=", ">", ">=")

#: background tags for symbols
TAG_USER = "user"
TAG_INT = "builtin-int"
TAG_REAL = "builtin-real"
TAG_BOOL = "builtin-bool"


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __repr__(self):
        return f"{self.name}:{self.sort}"


@dataclass(frozen=True)
class App:
    """Application of a (possibly 0-ary) function constant."""
    fn: str
    args: tuple = ()

    def __repr__(self):
        if not self.args:
            return self.fn
        return f"{self.fn}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True)
class Lit:
    """A builtin literal: int, exact rational, or boolean."""
    value: Union[int, Fraction, bool]

    def __repr__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Obj:
    """Object name: a handle that denotes a universe element directly.

    Only produced by grounding; every interpretation maps Obj(e) to e.
    """
    elem: object

    def __repr__(self):
        return f"<{self.elem!r}>"


Term = Union[Var, App, Lit, Obj]


# ---------------------------------------------------------------------------
# formulas

@dataclass(frozen=True)
class Bottom:
    def __repr__(self):
        return "false"


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    def __repr__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True)
class Equal:
    left: Term
    right: Term

    def __repr__(self):
        return f"({self.left!r} = {self.right!r})"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __repr__(self):
        return f"({self.left!r} & {self.right!r})"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __repr__(self):
        return f"({self.left!r} | {self.right!r})"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __repr__(self):
        return f"({self.left!r} -> {self.right!r})"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"

    def __repr__(self):
        return f"forall {self.var!r} ({self.body!r})"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"

    def __repr__(self):
        return f"exists {self.var!r} ({self.body!r})"


Formula = Union[Bottom, Atom, Equal, And, Or, Implies, Forall, Exists]

BOT = Bottom()


def Not(f: Formula) -> Formula:
    return Implies(f, BOT)


TOP = Not(BOT)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def Choice(f: Formula) -> Formula:
    """The choice formula {F} = F | not F."""
    return Or(f, Not(f))


def is_not(f: Formula):
    """If f is a negation Implies(G, Bottom), return G, else None."""
    if isinstance(f, Implies) and f.right == BOT:
        return f.left
    return None


def conj(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    if not fs:
        return BOT
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def conjuncts(f: Formula) -> Iterator[Formula]:
    """Flatten a right/left-nested conjunction (does not cross TOP)."""
    if isinstance(f, And):
        yield from conjuncts(f.left)
        yield from conjuncts(f.right)
    else:
        yield f


def disjuncts(f: Formula) -> Iterator[Formula]:
    if isinstance(f, Or):
        yield from disjuncts(f.left)
        yield from disjuncts(f.right)
    else:
        yield f


def close_universally(f: Formula, variables: Iterable[Var]) -> Formula:
    for v in reversed(list(variables)):
        f = Forall(v, f)
    return f


def close_existentially(f: Formula, variables: Iterable[Var]) -> Formula:
    for v in reversed(list(variables)):
        f = Exists(v, f)
    return f


# ---------------------------------------------------------------------------
# signatures

@dataclass
class SortDecl:
    name: str
    #: tuple of elements if the sort carries a declared finite extent, else None
    elements: tuple | None = None
    tag: str = TAG_USER


@dataclass
class Signature:
    """Sorts with a subsort partial order, typed function/predicate constants.

    Builtin sorts int/real/bool exist implicitly; declared integer range
    sorts are subsorts of int.
    """

    sorts: dict = field(default_factory=dict)            # name -> SortDecl
    subsorts: set = field(default_factory=set)           # (sub, super) pairs
    functions: dict = field(default_factory=dict)        # name -> (argsorts, valsort)
    predicates: dict = field(default_factory=dict)       # name -> argsorts
    background: dict = field(default_factory=dict)       # symbol -> tag

    def __post_init__(self):
        for s, tag in ((INT, TAG_INT), (REAL, TAG_REAL), (BOOL, TAG_BOOL)):
            if s not in self.sorts:
                elems = (False, True) if s == BOOL else None
                self.sorts[s] = SortDecl(s, elems, tag)
        self.subsorts.add((INT, REAL))

    # -- declarations ------------------------------------------------------
    def declare_sort(self, name, elements=None, tag=TAG_USER):
        if name in self.sorts:
            raise DeclarationError(f"sort {name!r} already declared")
        self.sorts[name] = SortDecl(name, tuple(elements) if elements is not None else None, tag)
        if elements is not None and all(isinstance(e, int) and not isinstance(e, bool) for e in elements):
            # integer-valued extents live inside the builtin int sort
            self.subsorts.add((name, INT))

    def declare_range_sort(self, name, lo, hi):
        if lo > hi:
            raise DeclarationError(f"empty range sort {name!r}: {lo}..{hi}")
        self.declare_sort(name, range(lo, hi + 1))

    def declare_subsort(self, sub, sup):
        for s in (sub, sup):
            if s not in self.sorts:
                raise DeclarationError(f"unknown sort {s!r}")
        self.subsorts.add((sub, sup))
        if self._cycle_check(sub):
            raise DeclarationError(f"subsort cycle through {sub!r}")

    def declare_func(self, name, argsorts, valsort, tag=TAG_USER):
        self._check_fresh(name)
        for s in tuple(argsorts) + (valsort,):
            if s not in self.sorts:
                raise DeclarationError(f"unknown sort {s!r} for function {name!r}")
        self.functions[name] = (tuple(argsorts), valsort)
        self.background[name] = tag

    def declare_object(self, name, sort, tag=TAG_USER):
        self.declare_func(name, (), sort, tag)

    def declare_pred(self, name, argsorts, tag=TAG_USER):
        self._check_fresh(name)
        for s in argsorts:
            if s not in self.sorts:
                raise DeclarationError(f"unknown sort {s!r} for predicate {name!r}")
        self.predicates[name] = tuple(argsorts)
        self.background[name] = tag

    def _check_fresh(self, name):
        if name in self.functions or name in self.predicates:
            raise DeclarationError(f"symbol {name!r} already declared")

    def _cycle_check(self, start):
        seen, stack = set(), [start]
        while stack:
            s = stack.pop()
            for a, b in self.subsorts:
                if a == s and b != s:
                    if b == start:
                        return True
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
        return False

    # -- queries -----------------------------------------------------------
    def is_subsort(self, sub, sup):
        """Reflexive-transitive subsort test."""
        if sub == sup:
            return True
        seen, stack = set(), [sub]
        while stack:
            s = stack.pop()
            for a, b in self.subsorts:
                if a == s and b not in seen:
                    if b == sup:
                        return True
                    seen.add(b)
                    stack.append(b)
        return False

    def common_supersort(self, s1, s2):
        if self.is_subsort(s1, s2):
            return s2
        if self.is_subsort(s2, s1):
            return s1
        for s in self.sorts:
            if self.is_subsort(s1, s) and self.is_subsort(s2, s):
                return s
        return None

    def user_symbols(self):
        return [n for n in list(self.functions) + list(self.predicates)
                if self.background.get(n, TAG_USER) == TAG_USER]

    def copy(self):
        return Signature(dict(self.sorts), set(self.subsorts),
                         dict(self.functions), dict(self.predicates),
                         dict(self.background))

    def sort_of_term(self, t: Term, strict=True):
        if isinstance(t, Var):
            return t.sort
        if isinstance(t, Lit):
            if isinstance(t.value, bool):
                return BOOL
            if isinstance(t.value, int):
                return INT
            return REAL
        if isinstance(t, Obj):
            return None
        if t.fn in ARITH_FUNCS:
            sorts = [self.sort_of_term(a, strict) for a in t.args]
            if t.fn == "/" or REAL in sorts:
                return REAL
            return INT
        if t.fn in self.functions:
            return self.functions[t.fn][1]
        if strict:
            raise DeclarationError(f"unknown function {t.fn!r}")
        return None


# ---------------------------------------------------------------------------
# rules and programs

RULE_PLAIN = "plain"
RULE_CONSTRAINT = "constraint"
RULE_CHOICE = "choice-head"


@dataclass(frozen=True)
class Rule:
    head: Formula           # Bottom for constraints; the bare head for choice rules
    body: Formula
    kind: str = RULE_PLAIN

    def as_formula(self) -> Formula:
        head = Choice(self.head) if self.kind == RULE_CHOICE else self.head
        f = head if self.body == TOP else Implies(self.body, head)
        return close_universally(f, sorted(free_vars(f), key=lambda v: v.name))


@dataclass
class Program:
    signature: Signature
    rules: list
    intensional: tuple = ()
    #: declared per-sort finite extents (universe spec), from sort declarations
    universe: dict = field(default_factory=dict)

    def check(self):
        for name in self.intensional:
            if name not in self.signature.functions and name not in self.signature.predicates:
                raise DeclarationError(f"intensional symbol {name!r} not declared")
        if len(set(self.intensional)) != len(self.intensional):
            raise DeclarationError("duplicate intensional symbol")


@dataclass(frozen=True)
class IntensionalList:
    names: tuple

    @classmethod
    def of(cls, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise DeclarationError("duplicate intensional symbol")
        return cls(names)

    def pred_part(self, sig: Signature):
        return tuple(n for n in self.names if n in sig.predicates)

    def func_part(self, sig: Signature):
        return tuple(n for n in self.names if n in sig.functions)

    def __contains__(self, name):
        return name in self.names

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)


def as_clist(c) -> IntensionalList:
    if isinstance(c, IntensionalList):
        return c
    return IntensionalList.of(c)


# ---------------------------------------------------------------------------
# free variables, substitution

def free_vars(f) -> set:
    if isinstance(f, (Var,)):
        return {f}
    if isinstance(f, (Lit, Obj, Bottom)):
        return set()
    if isinstance(f, App):
        out = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, Atom):
        out = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, Equal):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula/term: {f!r}")


def subst_term(t: Term, mapping: dict) -> Term:
    """Substitute terms for variables (mapping Var -> Term)."""
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, App):
        return App(t.fn, tuple(subst_term(a, mapping) for a in t.args))
    return t


def subst(f: Formula, mapping: dict) -> Formula:
    if isinstance(f, Bottom):
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, mapping) for a in f.args))
    if isinstance(f, Equal):
        return Equal(subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(subst(f.left, mapping), subst(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, subst(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def rename_symbols_term(t: Term, mapping: dict) -> Term:
    if isinstance(t, App):
        return App(mapping.get(t.fn, t.fn),
                   tuple(rename_symbols_term(a, mapping) for a in t.args))
    return t


def rename_symbols(f: Formula, mapping: dict) -> Formula:
    """Replace predicate/function constant names throughout a formula."""
    if isinstance(f, Bottom):
        return f
    if isinstance(f, Atom):
        return Atom(mapping.get(f.pred, f.pred),
                    tuple(rename_symbols_term(a, mapping) for a in f.args))
    if isinstance(f, Equal):
        return Equal(rename_symbols_term(f.left, mapping),
                     rename_symbols_term(f.right, mapping))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(rename_symbols(f.left, mapping), rename_symbols(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, rename_symbols(f.body, mapping))
    raise TypeError(f"not a formula: {f!r}")


def term_symbols(t: Term) -> set:
    if isinstance(t, App):
        out = {t.fn}
        for a in t.args:
            out |= term_symbols(a)
        return out
    return set()


def formula_symbols(f: Formula) -> set:
    """All predicate and function constant names occurring in f."""
    if isinstance(f, Bottom):
        return set()
    if isinstance(f, Atom):
        out = {f.pred}
        for a in f.args:
            out |= term_symbols(a)
        return out
    if isinstance(f, Equal):
        return term_symbols(f.left) | term_symbols(f.right)
    if isinstance(f, (And, Or, Implies)):
        return formula_symbols(f.left) | formula_symbols(f.right)
    if isinstance(f, (Forall, Exists)):
        return formula_symbols(f.body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# FOL representation of programs

def fol_representation(program: Program) -> Formula:
    """Conjunction of the universal closures of Body -> Head implications."""
    program.check()
    return conj(r.as_formula() for r in program.rules)


# ---------------------------------------------------------------------------
# polarity analysis

@dataclass(frozen=True)
class Occurrence:
    """One occurrence of a constant, with its implication-nesting context."""
    name: str
    path: tuple                  # child indices from the root
    antecedent_depth: int        # implications containing it in the antecedent
    negated: bool                # inside a subformula that begins with negation

    @property
    def positive(self):
        return self.antecedent_depth % 2 == 0

    @property
    def strictly_positive(self):
        return self.antecedent_depth == 0

    @property
    def polarity(self):
        if self.antecedent_depth == 0:
            return "strictly-positive"
        return "positive" if self.positive else "negative"


def occurrences(f: Formula, names) -> list:
    """All occurrences of the given constant names, in left-to-right order."""
    names = set(names)
    out = []

    def scan_term(t, path, depth, neg):
        if isinstance(t, App):
            if t.fn in names:
                out.append(Occurrence(t.fn, path, depth, neg))
            for i, a in enumerate(t.args):
                scan_term(a, path + (i,), depth, neg)

    def scan(g, path, depth, neg):
        if isinstance(g, Bottom):
            return
        if isinstance(g, Atom):
            if g.pred in names:
                out.append(Occurrence(g.pred, path, depth, neg))
            for i, a in enumerate(g.args):
                scan_term(a, path + (i,), depth, neg)
        elif isinstance(g, Equal):
            scan_term(g.left, path + (0,), depth, neg)
            scan_term(g.right, path + (1,), depth, neg)
        elif isinstance(g, (And, Or)):
            scan(g.left, path + (0,), depth, neg)
            scan(g.right, path + (1,), depth, neg)
        elif isinstance(g, Implies):
            child_neg = neg or (g.right == BOT)
            scan(g.left, path + (0,), depth + 1, child_neg)
            scan(g.right, path + (1,), depth, neg)
        elif isinstance(g, (Forall, Exists)):
            scan(g.body, path + (0,), depth, neg)
        else:
            raise TypeError(f"not a formula: {g!r}")

    scan(f, (), 0, False)
    return out


def strictly_positive_symbols(f: Formula, names) -> set:
    return {o.name for o in occurrences(f, names) if o.strictly_positive}


def negative_on(f: Formula, c) -> bool:
    """True iff F has no strictly positive occurrence of any member of c."""
    c = as_clist(c)
    return not strictly_positive_symbols(f, c.names)


def occurrence_negated(f: Formula, names, index: int) -> bool:
    """Whether the index-th occurrence (in textual order) of any of the names
    lies inside a subformula beginning with negation."""
    return occurrences(f, names)[index].negated
