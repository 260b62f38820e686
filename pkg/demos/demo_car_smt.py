"""Car planning compiled to SMT-LIB.

A car on a road of length 4.5 accelerates or brakes with acceleration 2,
capped at speed 10.  The plan asks for the car to start and end at rest,
covering the whole road in two steps of chosen durations.  The theory is
tight, so its stable models are exactly the models of its completion, and
the completion compiles to a quantifier-free script over the reals.

One witness: accelerate for 3/2 time units (reaching speed 3), then brake
for 3/2 time units, stopping at position 9/2.

Run:  python3 demos/demo_car_smt.py
Set FSMKIT_SOLVER=/path/to/solver to also run the script through a solver.
"""

import pathlib

from fsmkit import fol_representation, to_clark_normal_form
from fsmkit.parser import parse_program
from fsmkit.aspmt import (
    BackgroundTheory, decode_model, emit_smtlib, run_solver, solver_path,
    validate_smtlib,
)

HERE = pathlib.Path(__file__).parent


def main():
    program = parse_program((HERE / "car.fsm").read_text(), file="car.fsm")
    f = fol_representation(program)
    c = program.intensional
    cnf = to_clark_normal_form(f, c, program.signature)
    bg = BackgroundTheory("reals")
    script = emit_smtlib(cnf, c, program.signature, bg)
    text = script.render()
    validate_smtlib(text)
    print(text)

    solver = solver_path()
    if solver is None:
        print("; set FSMKIT_SOLVER to run this script through a solver")
        return
    status, output = run_solver(script, solver)
    print(f"; solver says: {status}")
    if status == "sat":
        model = decode_model(output, script, program.signature, bg)
        print(";", model.funcs)


if __name__ == "__main__":
    main()
