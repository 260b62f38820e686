"""Command-line front end.

Subcommands cover the whole pipeline: parse, ground, stable, check,
complete, check-tight, unfold, eliminate, desort, to-smt, compare,
se-check.  Exit codes: 0 success, 1 negative semantic answer (not stable,
no models, not tight, refuted), 2 usage or fragment errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .syntax import (
    Choice, FsmError, FragmentError, RULE_CHOICE, as_clist,
    fol_representation,
)
from .parser import ParseError, parse_program, print_formula, print_program
from .interp import FiniteInterpretation, enumerate_interpretations
from .stable import (
    METHOD_REDUCT, METHOD_SECOND_ORDER, check_stable, check_stable_both,
    ground,
)
from .transforms import (
    check_strong_equivalence_bounded, complete, dependency_graph, find_cycle,
    to_clark_normal_form, unfold,
)
from .eliminations import eliminate_function, eliminate_predicate
from .sortsred import to_unsorted
from .aspmt import (
    BackgroundTheory, KIND_INTEGERS, KIND_REALS, emit_smtlib, run_solver,
    solve_all, solver_path, validate_smtlib,
)
from .related import CausalRule, IfRule, cm_check, if_check


EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2


def _load_program(path):
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read(), file=path)


def _universe(program, overrides):
    universe = {s: tuple(ext) for s, ext in program.universe.items()}
    for spec in overrides or []:
        if "=" not in spec:
            raise FsmError(f"bad universe spec {spec!r} (want sort=lo..hi)")
        name, rng = spec.split("=", 1)
        if ".." in rng:
            lo, hi = rng.split("..", 1)
            universe[name] = tuple(range(int(lo), int(hi) + 1))
        else:
            universe[name] = tuple(
                int(p) if p.lstrip("-").isdigit() else p
                for p in rng.split(","))
    return universe


def _relative_to(program, flag):
    if flag:
        return as_clist([p.strip() for p in flag.split(",") if p.strip()])
    return as_clist(program.intensional)


def _check_fn(method):
    if method == "both":
        return check_stable_both
    return lambda f, c, i: check_stable(f, c, i, method)


_WORK = {}


def _worker(indices):
    f, c, method, interps = _WORK["job"]
    fn = _check_fn(method)
    return [idx for idx in indices if fn(f, c.names, interps[idx])]


def _stable_models_parallel(f, c, sig, universe, method, jobs):
    interps = list(enumerate_interpretations(sig, universe))
    if jobs <= 1:
        fn = _check_fn(method)
        return [i for i in interps if fn(f, c.names, i)]
    _WORK["job"] = (f, c, method, interps)
    chunks = [list(range(k, len(interps), jobs)) for k in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_worker, chunks))
    picked = sorted(idx for chunk in results for idx in chunk)
    return [interps[idx] for idx in picked]


def _canonical_models(models):
    out = [m.to_json() for m in models]
    out.sort(key=lambda m: json.dumps(m, sort_keys=True))
    return out


# ---------------------------------------------------------------------------
# subcommand bodies

def cmd_parse(args):
    program = _load_program(args.file)
    sys.stdout.write(print_program(program))
    return EXIT_OK


def cmd_ground(args):
    program = _load_program(args.file)
    universe = _universe(program, args.universe)
    f = fol_representation(program)
    base = FiniteInterpretation(program.signature, universe)
    print(repr(ground(f, base)))
    return EXIT_OK


def cmd_stable(args):
    program = _load_program(args.file)
    universe = _universe(program, args.universe)
    c = _relative_to(program, args.relative_to)
    f = fol_representation(program)
    models = _stable_models_parallel(f, c, program.signature, universe,
                                     args.method, args.jobs)
    json.dump(_canonical_models(models), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK if models else EXIT_NO


def cmd_check(args):
    program = _load_program(args.file)
    c = _relative_to(program, args.relative_to)
    f = fol_representation(program)
    with open(args.interp, encoding="utf-8") as fh:
        data = json.load(fh)
    i = FiniteInterpretation.from_json(data, program.signature)
    verdict = _check_fn(args.method)(f, c.names, i)
    json.dump({"stable": verdict}, sys.stdout)
    sys.stdout.write("\n")
    return EXIT_OK if verdict else EXIT_NO


def cmd_complete(args):
    program = _load_program(args.file)
    c = _relative_to(program, args.relative_to)
    f = fol_representation(program)
    cnf = to_clark_normal_form(f, c, program.signature)
    print(print_formula(complete(cnf, c, program.signature)))
    return EXIT_OK


def cmd_check_tight(args):
    program = _load_program(args.file)
    c = _relative_to(program, args.relative_to)
    f = fol_representation(program)
    cnf = to_clark_normal_form(f, c, program.signature)
    cycle = find_cycle(dependency_graph(cnf, c))
    if cycle is None:
        print("tight")
        return EXIT_OK
    print("not tight: " + " -> ".join(cycle))
    return EXIT_NO


def cmd_unfold(args):
    program = _load_program(args.file)
    c = _relative_to(program, args.relative_to)
    f = fol_representation(program)
    print(print_formula(unfold(f, c, program.signature)))
    return EXIT_OK


def cmd_eliminate(args):
    program = _load_program(args.file)
    f = fol_representation(program)
    if args.pred and args.to_func:
        new_f, axioms, _ = eliminate_predicate(f, args.pred, args.to_func,
                                               program.signature)
    elif args.func and args.to_pred:
        new_f, axioms, _ = eliminate_function(f, args.func, args.to_pred,
                                              program.signature)
    else:
        raise FsmError("need --pred P --to-func F or --func F --to-pred P")
    print(print_formula(new_f))
    for a in axioms:
        print(print_formula(a))
    return EXIT_OK


def cmd_desort(args):
    program = _load_program(args.file)
    f = fol_representation(program)
    new_f, axioms, _ = to_unsorted(f, program.signature)
    print(print_formula(new_f))
    for a in axioms:
        print(print_formula(a))
    return EXIT_OK


def cmd_to_smt(args):
    program = _load_program(args.file)
    c = _relative_to(program, args.relative_to)
    f = fol_representation(program)
    cnf = to_clark_normal_form(f, c, program.signature)
    kind = KIND_REALS if args.background == "reals" else KIND_INTEGERS
    bg = BackgroundTheory(kind)
    script = emit_smtlib(cnf, c, program.signature, bg, logic=args.logic)
    text = script.render()
    validate_smtlib(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if solver_path(args.solver):
        if args.all_models:
            models = solve_all(script, program.signature, bg,
                               solver=args.solver, timeout_ms=args.timeout)
            json.dump(_canonical_models(models), sys.stdout, indent=2,
                      sort_keys=True)
            sys.stdout.write("\n")
            return EXIT_OK if models else EXIT_NO
        status, _ = run_solver(script, args.solver, args.timeout)
        print(status)
        return EXIT_OK if status == "sat" else EXIT_NO
    return EXIT_OK


def cmd_compare(args):
    program = _load_program(args.file)
    universe = _universe(program, args.universe)
    c = _relative_to(program, args.relative_to)
    semantics = [s.strip() for s in args.semantics.split(",") if s.strip()]
    supported = {"fsm", "if", "cm"}
    for s in semantics:
        if s not in supported:
            raise FragmentError(
                f"semantics {s!r} is only available through the library "
                "API (it needs rule structure beyond program files)")
    f = fol_representation(program)
    if_rules = [IfRule(_choice_free(r), r.body) for r in program.rules]
    cm_rules = [CausalRule(_choice_free(r), r.body) for r in program.rules]
    interps = list(enumerate_interpretations(program.signature, universe))
    verdicts = {s: [] for s in semantics}
    for i in interps:
        for s in semantics:
            if s == "fsm":
                verdicts[s].append(check_stable(f, c.names, i))
            elif s == "if":
                verdicts[s].append(if_check(if_rules, c.names, i))
            else:
                verdicts[s].append(cm_check(cm_rules, c.names, i))
    json.dump({"interpretations": [i.to_json() for i in interps],
               "verdicts": verdicts}, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


def _choice_free(rule):
    if rule.kind == RULE_CHOICE:
        return Choice(rule.head)
    return rule.head


def cmd_se_check(args):
    p1 = _load_program(args.file)
    p2 = _load_program(args.file2)
    f = fol_representation(p1)
    g = fol_representation(p2)
    sig = p1.signature
    c = None
    if args.relative_to:
        c = [s.strip() for s in args.relative_to.split(",") if s.strip()]
    overrides = _universe(p1, args.universe) if args.universe else None
    report = check_strong_equivalence_bounded(
        sig, f, g, c=c, max_size=args.max_universe,
        universe_overrides=overrides)
    if report.equivalent:
        print(f"no refutation up to universe size {args.max_universe} "
              f"({report.checked} interpretations)")
        return EXIT_OK
    print(f"refuted: {report.reason}")
    print(json.dumps(report.witness.to_json(), sort_keys=True))
    if report.mirror_witness is not None:
        print(json.dumps(report.mirror_witness.to_json(), sort_keys=True))
    return EXIT_NO


# ---------------------------------------------------------------------------
# argument wiring

def build_parser():
    top = argparse.ArgumentParser(
        prog="fsmkit",
        description="stable models with intensional functions: checking, "
                    "completion, and SMT compilation over finite domains")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, interp=False, second_file=False):
        p.add_argument("file", help="program file")
        if second_file:
            p.add_argument("file2", help="second program file")
        p.add_argument("--relative-to", default=None,
                       help="comma-separated intensional constants")
        p.add_argument("--universe", action="append", default=[],
                       metavar="SORT=LO..HI",
                       help="override a sort extent")
        if interp:
            p.add_argument("--interp", required=True,
                           help="interpretation JSON file")

    p = sub.add_parser("parse", help="validate and echo a program")
    p.add_argument("file")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("ground", help="ground over the finite universe")
    common(p)
    p.set_defaults(fn=cmd_ground)

    p = sub.add_parser("stable", help="enumerate stable models")
    common(p)
    p.add_argument("--method", default=METHOD_REDUCT,
                   choices=[METHOD_REDUCT, METHOD_SECOND_ORDER, "both"])
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_stable)

    p = sub.add_parser("check", help="check one interpretation")
    common(p, interp=True)
    p.add_argument("--method", default=METHOD_REDUCT,
                   choices=[METHOD_REDUCT, METHOD_SECOND_ORDER, "both"])
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("complete", help="definitional completion")
    common(p)
    p.set_defaults(fn=cmd_complete)

    p = sub.add_parser("check-tight", help="dependency-graph acyclicity")
    common(p)
    p.set_defaults(fn=cmd_check_tight)

    p = sub.add_parser("unfold", help="flatten nested intensional functions")
    common(p)
    p.set_defaults(fn=cmd_unfold)

    p = sub.add_parser("eliminate", help="swap a predicate and a function")
    p.add_argument("file")
    p.add_argument("--pred")
    p.add_argument("--to-func")
    p.add_argument("--func")
    p.add_argument("--to-pred")
    p.set_defaults(fn=cmd_eliminate)

    p = sub.add_parser("desort", help="merge sorts into one with sort predicates")
    p.add_argument("file")
    p.set_defaults(fn=cmd_desort)

    p = sub.add_parser("to-smt", help="compile a completed tight theory")
    common(p)
    p.add_argument("--logic", default=None)
    p.add_argument("--background", default="integers",
                   choices=["integers", "reals"])
    p.add_argument("--solver", default=None)
    p.add_argument("--all-models", action="store_true")
    p.add_argument("--timeout", type=int, default=60000,
                   help="solver timeout in milliseconds")
    p.add_argument("--out", default=None, help="write the script here")
    p.set_defaults(fn=cmd_to_smt)

    p = sub.add_parser("compare", help="verdict matrix across semantics")
    common(p)
    p.add_argument("--semantics", default="fsm,if,cm")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("se-check", help="bounded strong-equivalence search")
    common(p, second_file=True)
    p.add_argument("--max-universe", type=int, default=3)
    p.set_defaults(fn=cmd_se_check)

    return top


def main(argv=None):
    top = build_parser()
    try:
        args = top.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as e:
        print(str(e), file=sys.stderr)
        return EXIT_ERROR
    except (FsmError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
