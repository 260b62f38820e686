"""Water tank walkthrough.

A tank holds between 0 and 20 units.  By default the level rises by one
unit per step (a default, not a hard rule), but flushing forces it to 0.
The level at the next step is the only intensional constant; the starting
level and the flush signal are facts we are given.

Run:  python3 demos/demo_watertank.py
"""

import pathlib
import time

from fsmkit import FiniteInterpretation, check_stable_both, fol_representation
from fsmkit.parser import parse_program

HERE = pathlib.Path(__file__).parent


def snapshot(program, amt0, flush, amt1):
    universe = dict(program.universe)
    return FiniteInterpretation(
        program.signature, universe,
        funcs={"amt0": {(): amt0}, "amt1": {(): amt1}},
        preds={"flush": {()} if flush else set()})


def main():
    program = parse_program((HERE / "watertank.fsm").read_text(),
                            file="watertank.fsm")
    f = fol_representation(program)
    c = program.intensional

    cases = [
        ("no flush, level rises by one", 5, False, 6),
        ("no flush, level jumps by three", 5, False, 8),
        ("flush empties the tank", 5, True, 0),
    ]
    t0 = time.perf_counter()
    for label, amt0, flush, amt1 in cases:
        i = snapshot(program, amt0, flush, amt1)
        verdict = check_stable_both(f, c, i)
        print(f"amt0={amt0} flush={flush} amt1={amt1}: "
              f"{'stable' if verdict else 'not stable'}  ({label})")
    print(f"checked {len(cases)} snapshots in "
          f"{time.perf_counter() - t0:.3f}s (both checkers)")


if __name__ == "__main__":
    main()
