"""Clark normal form, completion, tightness, unfolding, plainness checks,
and a bounded strong-equivalence checker.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    And, App, Atom, BOT, Bottom, Choice, ContractViolation, Equal, Exists,
    Forall, Formula, FragmentError, FsmError, Iff, Implies, Not, Or, Signature,
    TOP, Var, as_clist, close_existentially, conj, conjuncts, disj, disjuncts,
    formula_symbols, free_vars, is_not, negative_on, occurrences, subst,
    term_symbols,
)
from .interp import (
    FiniteInterpretation, enumerate_interpretations, less_on_c, satisfies,
    vary_on,
)
from .stable import (
    extend_signature_with_mirrors, extended_interpretation, mirror_names, star,
)


# ---------------------------------------------------------------------------
# rule-shaped conjuncts

def _strip_foralls(f):
    variables = []
    while isinstance(f, Forall):
        variables.append(f.var)
        f = f.body
    return variables, f


def _split_rule(matrix):
    """Split a quantifier-free matrix into (body, head)."""
    if isinstance(matrix, Implies) and matrix.right != BOT:
        return matrix.left, matrix.right
    return TOP, matrix


def _head_constant(head, c):
    """The defined constant of a rule head, or None.

    Recognized heads: p(t), f(t) = t0 (left-rooted), and the choice form
    { H } of either.
    """
    inner = _choice_of(head)
    target = inner if inner is not None else head
    if isinstance(target, Atom) and target.pred in c:
        return target.pred
    if isinstance(target, Equal) and isinstance(target.left, App) \
            and target.left.fn in c:
        return target.left.fn
    return None


def _choice_of(f):
    if isinstance(f, Or) and is_not(f.right) == f.left:
        return f.left
    return None


# ---------------------------------------------------------------------------
# Clark normal form

def _fresh_vars(base_names, sorts, taken):
    out = []
    i = 0
    for s in sorts:
        while True:
            i += 1
            name = f"X{i}"
            if name not in taken:
                break
        taken.add(name)
        out.append(Var(name, s))
    return out


def to_clark_normal_form(f: Formula, c, sig: Signature) -> Formula:
    """Rewrite a conjunction of rules into one definition per member of c.

    Each conjunct must be (the universal closure of) either a rule whose head
    defines a single member of c, or a constraint with no strictly positive
    occurrence of c.  The result has, for every member of c, exactly one
    conjunct forall x (G -> p(x)) or forall x y (G -> f(x) = y), with the
    original bodies collected as a disjunction of guarded existentials.
    """
    c = as_clist(c)
    defs = {n: [] for n in c}
    passthrough = []
    for item in conjuncts(f):
        variables, matrix = _strip_foralls(item)
        body, head = _split_rule(matrix)
        n = _head_constant(head, c)
        if n is None:
            if negative_on(matrix, c):
                passthrough.append(item)
                continue
            raise FragmentError(
                f"rule head defines no single intensional constant: {item!r}")
        defs[n].append((variables, body, head))

    taken = {v.name for item in conjuncts(f)
             for v in free_vars(_strip_foralls(item)[1])}
    for item in conjuncts(f):
        variables, _ = _strip_foralls(item)
        taken.update(v.name for v in variables)

    parts = []
    for n in c:
        if n in sig.predicates:
            argsorts = sig.predicates[n]
            xs = _fresh_vars(None, argsorts, taken)
            target = Atom(n, tuple(xs))
            val_var = None
        else:
            argsorts, valsort = sig.functions[n]
            xs = _fresh_vars(None, argsorts, taken)
            val_var = _fresh_vars(None, (valsort,), taken)[0]
            target = Equal(App(n, tuple(xs)), val_var)
        cases = [_cnf_case(n, rule, xs, val_var, target, c) for rule in defs[n]]
        parts.append(close_universally_sorted(
            Implies(disj(cases), target), xs + ([val_var] if val_var else [])))
    return conj(parts + passthrough)


def close_universally_sorted(f, variables):
    for v in reversed(variables):
        f = Forall(v, f)
    return f


def _cnf_case(n, rule, xs, val_var, target, c):
    variables, body, head = rule
    inner = _choice_of(head)
    is_choice = inner is not None
    head = inner if is_choice else head

    if isinstance(head, Atom):
        head_terms = list(head.args)
    else:
        head_terms = list(head.left.args) + [head.right]
    slots = xs + ([val_var] if val_var is not None else [])
    assert len(head_terms) == len(slots)

    # head-variable shortcut: when the head arguments are distinct variables,
    # rename them to the definition variables instead of equating
    if all(isinstance(t, Var) for t in head_terms) \
            and len(set(head_terms)) == len(head_terms):
        mapping = dict(zip(head_terms, slots))
        body2 = subst(body, mapping)
        rest = [v for v in variables if v not in mapping]
        guards = []
    else:
        mapping = {}
        body2 = body
        rest = list(variables)
        guards = [Equal(s, t) for s, t in zip(slots, head_terms)]

    pieces = guards + ([] if body2 == TOP else [body2])
    if is_choice:
        pieces.append(Not(Not(target)))
    if not pieces:
        pieces = [TOP]
    return close_existentially(conj(pieces), rest)


def is_clark_normal_form(f: Formula, c, sig: Signature) -> bool:
    try:
        _definitions(f, c, sig)
        return True
    except ContractViolation:
        return False


def _definitions(f: Formula, c, sig: Signature):
    """Map each member of c to its single defining conjunct (G, target)."""
    c = as_clist(c)
    defs = {}
    passthrough = []
    for item in conjuncts(f):
        variables, matrix = _strip_foralls(item)
        if isinstance(matrix, Implies) and matrix.right != BOT:
            head = matrix.right
            n = None
            if isinstance(head, Atom) and head.pred in c \
                    and all(isinstance(t, Var) for t in head.args) \
                    and len(set(head.args)) == len(head.args):
                n = head.pred
            elif isinstance(head, Equal) and isinstance(head.left, App) \
                    and head.left.fn in c and isinstance(head.right, Var) \
                    and all(isinstance(t, Var) for t in head.left.args) \
                    and len(set(head.left.args + (head.right,))) == len(head.left.args) + 1:
                n = head.left.fn
            if n is not None:
                if n in defs:
                    raise ContractViolation(f"two definitions for {n!r}")
                defs[n] = (variables, matrix.left, head)
                continue
        if not negative_on(matrix, c):
            raise ContractViolation(
                f"conjunct is neither a definition nor a constraint: {item!r}")
        passthrough.append(item)
    missing = [n for n in c if n not in defs]
    if missing:
        raise ContractViolation(f"no definition for {missing}")
    return defs, passthrough


def complete(f: Formula, c, sig: Signature) -> Formula:
    """Completion: turn each definition's implication into a biconditional."""
    defs, passthrough = _definitions(f, c, sig)
    c = as_clist(c)
    parts = []
    for n in c:
        variables, body, head = defs[n]
        parts.append(close_universally_sorted(Iff(body, head), variables))
    return conj(parts + passthrough)


# ---------------------------------------------------------------------------
# dependency graph and tightness

def dependency_graph(f: Formula, c) -> dict:
    """Edges n -> m between members of c: n has a strictly positive
    occurrence in the consequent of a strictly positive implication whose
    antecedent mentions m."""
    c = as_clist(c)
    names = set(c.names)
    edges = {n: set() for n in c}

    def scan(g, sp):
        if isinstance(g, (And, Or)):
            scan(g.left, sp)
            scan(g.right, sp)
        elif isinstance(g, (Forall, Exists)):
            scan(g.body, sp)
        elif isinstance(g, Implies):
            if sp:
                heads = {o.name for o in occurrences(g.right, names)
                         if o.strictly_positive}
                bodies = {o.name for o in occurrences(g.left, names)
                          if o.strictly_positive}
                for h in heads:
                    edges[h] |= bodies
            scan(g.right, sp)
            scan(g.left, False)

    scan(f, True)
    return {n: sorted(ms) for n, ms in edges.items()}


def find_cycle(graph: dict):
    """A cycle in the graph as a list of nodes, or None."""
    color = {n: 0 for n in graph}
    parent = {}

    def dfs(n):
        color[n] = 1
        for m in graph.get(n, ()):
            if m not in color:
                continue
            if color[m] == 1:
                cycle = [m, n]
                cur = n
                while cur != m:
                    cur = parent[cur]
                    cycle.append(cur)
                cycle.reverse()
                return cycle
            if color[m] == 0:
                parent[m] = n
                found = dfs(m)
                if found:
                    return found
        color[n] = 2
        return None

    for n in graph:
        if color[n] == 0:
            found = dfs(n)
            if found:
                return found
    return None


def is_tight(f: Formula, c) -> bool:
    return find_cycle(dependency_graph(f, c)) is None


# ---------------------------------------------------------------------------
# plainness

def _c_rooted(t, cf):
    return isinstance(t, App) and t.fn in cf


def _c_free(t, cf):
    return not (term_symbols(t) & cf)


def is_f_plain(f: Formula, flist) -> bool:
    """Every atom either avoids the listed functions entirely or has the
    form f(t) = t1 with f listed and t, t1 avoiding them."""
    cf = set(flist)

    def atom_ok(g):
        if isinstance(g, Atom):
            return all(_c_free(a, cf) for a in g.args)
        l, r = g.left, g.right
        if _c_rooted(l, cf) and all(_c_free(a, cf) for a in l.args) and _c_free(r, cf):
            return True
        if _c_rooted(r, cf) and all(_c_free(a, cf) for a in r.args) and _c_free(l, cf):
            return True
        return _c_free(l, cf) and _c_free(r, cf)

    return all(atom_ok(g) for g in _atomic_subformulas(f))


def is_c_plain(f: Formula, c, sig: Signature) -> bool:
    c = as_clist(c)
    return is_f_plain(f, c.func_part(sig))


def _atomic_subformulas(f):
    if isinstance(f, (Atom, Equal)):
        yield f
    elif isinstance(f, (And, Or, Implies)):
        yield from _atomic_subformulas(f.left)
        yield from _atomic_subformulas(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from _atomic_subformulas(f.body)


def _strictly_positive_atoms(f):
    if isinstance(f, (Atom, Equal)):
        yield f
    elif isinstance(f, (And, Or)):
        yield from _strictly_positive_atoms(f.left)
        yield from _strictly_positive_atoms(f.right)
    elif isinstance(f, Implies):
        yield from _strictly_positive_atoms(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from _strictly_positive_atoms(f.body)


def is_head_c_plain(f: Formula, c, sig: Signature) -> bool:
    """Every strictly positive atomic occurrence is c-plain."""
    c = as_clist(c)
    cf = set(c.func_part(sig))

    def atom_ok(g):
        if isinstance(g, Atom):
            return all(_c_free(a, cf) for a in g.args)
        l, r = g.left, g.right
        if _c_rooted(l, cf):
            return all(_c_free(a, cf) for a in l.args) and _c_free(r, cf)
        if _c_rooted(r, cf):
            return all(_c_free(a, cf) for a in r.args) and _c_free(l, cf)
        return _c_free(l, cf) and _c_free(r, cf)

    return all(atom_ok(g) for g in _strictly_positive_atoms(f))


# ---------------------------------------------------------------------------
# unfolding

class _FreshVars:
    def __init__(self, f):
        self.taken = set()

        def collect(g):
            if isinstance(g, (Forall, Exists)):
                self.taken.add(g.var.name)
                collect(g.body)
            elif isinstance(g, (And, Or, Implies)):
                collect(g.left)
                collect(g.right)
        collect(f)
        self.taken |= {v.name for v in free_vars(f)}
        self.i = 0

    def make(self, sort):
        while True:
            self.i += 1
            name = f"U{self.i}"
            if name not in self.taken:
                self.taken.add(name)
                return Var(name, sort)


def unfold(f: Formula, c, sig: Signature) -> Formula:
    """Flatten nested occurrences of the listed intensional functions.

    Each atom containing a listed function application in a non-root
    position is replaced by an existential: the atom with the offending
    subterms replaced by fresh variables, conjoined with defining guards
    (which are unfolded recursively).
    """
    c = as_clist(c)
    cf = set(c.func_part(sig))
    fresh = _FreshVars(f)

    def offending_in_term(t, is_root):
        """Maximal c-rooted subterms of t, skipping the root when allowed."""
        if _c_rooted(t, cf):
            if is_root:
                out = []
                for a in t.args:
                    out.extend(offending_in_term(a, False))
                return out
            return [t]
        if isinstance(t, App):
            out = []
            for a in t.args:
                out.extend(offending_in_term(a, False))
            return out
        return []

    def replace(t, mapping):
        if t in mapping:
            return mapping[t]
        if isinstance(t, App):
            return App(t.fn, tuple(replace(a, mapping) for a in t.args))
        return t

    def unfold_atom(g):
        if isinstance(g, Atom):
            bad = []
            for a in g.args:
                bad.extend(offending_in_term(a, False))
        else:
            l, r = g.left, g.right
            if _c_rooted(l, cf):
                bad = offending_in_term(l, True) + offending_in_term(r, False)
            elif _c_rooted(r, cf):
                bad = offending_in_term(l, False) + offending_in_term(r, True)
            else:
                bad = offending_in_term(l, False) + offending_in_term(r, False)
        # keep first occurrence of each distinct offending term
        seen, uniq = set(), []
        for t in bad:
            if t not in seen:
                seen.add(t)
                uniq.append(t)
        if not uniq:
            return g
        mapping = {t: fresh.make(sig.sort_of_term(t)) for t in uniq}
        if isinstance(g, Atom):
            core = Atom(g.pred, tuple(replace(a, mapping) for a in g.args))
        else:
            core = Equal(replace(g.left, mapping), replace(g.right, mapping))
        guards = [unfold_atom(Equal(t, x)) for t, x in mapping.items()]
        return close_existentially(conj([core] + guards), list(mapping.values()))

    def go(g):
        if isinstance(g, (Bottom,)):
            return g
        if isinstance(g, (Atom, Equal)):
            return unfold_atom(g)
        if isinstance(g, (And, Or, Implies)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, go(g.body))
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# bounded strong-equivalence checking

@dataclass
class SEReport:
    equivalent: bool
    checked: int
    max_size: int
    witness: FiniteInterpretation | None = None
    mirror_witness: FiniteInterpretation | None = None
    reason: str = ""

    def __bool__(self):
        return self.equivalent


def check_strong_equivalence_bounded(sig: Signature, f: Formula, g: Formula,
                                     c=None, max_size=3,
                                     universe_overrides=None) -> SEReport:
    """Search finite universes up to max_size for a refutation of strong
    equivalence: a classical model of exactly one of F, G, or a mirror
    assignment separating F* from G*.
    """
    if c is None:
        syms = formula_symbols(f) | formula_symbols(g)
        c = [n for n in sig.user_symbols() if n in syms]
    c = as_clist(c)
    overrides = dict(universe_overrides or {})

    mirrors = mirror_names(c, sig)
    ext_sig = extend_signature_with_mirrors(sig, c, mirrors)
    fs = star(f, c, mirrors)
    gs = star(g, c, mirrors)

    checked = 0
    open_sorts = [s for s in sig.sorts
                  if s not in overrides
                  and sig.sorts[s].elements is None
                  and sig.sorts[s].tag == "user"]
    for k in range(1, max_size + 1):
        universe = dict(overrides)
        for s, decl in sig.sorts.items():
            if s in universe:
                continue
            if decl.elements is not None:
                universe[s] = decl.elements
        for s in open_sorts:
            universe[s] = tuple(f"{s}{j}" for j in range(k))
        for i in enumerate_interpretations(sig, universe):
            checked += 1
            if satisfies(i, f) != satisfies(i, g):
                return SEReport(False, checked, max_size, witness=i,
                                reason="classical models differ")
            for j in vary_on(i, list(c.names)):
                if not less_on_c(j, i, c):
                    continue
                ext = extended_interpretation(i, j, c, mirrors, ext_sig)
                if satisfies(ext, fs) != satisfies(ext, gs):
                    return SEReport(False, checked, max_size, witness=i,
                                    mirror_witness=j,
                                    reason="star transforms differ")
        if not open_sorts:
            break
    return SEReport(True, checked, max_size)
