"""Tour of the LP kernel: float and rational solves, duals, dualization.

The program below is deliberately tiny so every number can be checked by
hand:   maximize 3x + 2y  s.t.  x + y <= 4,  x + 3y <= 6.
"""

try:
    import poacert  # noqa: F401
except ImportError:  # running from a source checkout without installing
    import pathlib
    import sys

    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fractions import Fraction as F

from poacert import linprog as lp

program = lp.LinearProgram(
    lp.MAXIMIZE,
    ["x", "y"],
    {"x": 3, "y": 2},
    [
        lp.Row({"x": 1, "y": 1}, lp.LE, 4, "capacity"),
        lp.Row({"x": 1, "y": 3}, lp.LE, 6, "budget"),
    ],
    name="tiny",
)

rep = lp.solve(program)
print(f"float solve:    value {rep.value}, point {rep.primal}")
print(f"row duals:      {rep.duals}")

exact = lp.LinearProgram(
    lp.MAXIMIZE,
    ["x", "y"],
    {"x": F(3), "y": F(2)},
    [
        lp.Row({"x": F(1), "y": F(1)}, lp.LE, F(4), "capacity"),
        lp.Row({"x": F(1), "y": F(3)}, lp.LE, F(6), "budget"),
    ],
    name="tiny",
)
rex = lp.solve(exact, exact=True)
print(f"rational solve: value {rex.value}, point {rex.primal}")

dual = lp.dualize(program)
red = lp.solve(dual)
print(f"\ndual program:   {len(dual.rows)} rows over {len(dual.variables)} variables")
print(f"dual optimum:   {red.value}  (strong duality: equals the primal optimum)")

print("\nfixed-format text export:")
print(lp.to_fixed_format(program))
