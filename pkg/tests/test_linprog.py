"""Solver-level tests: textbook instances, duality, exact arithmetic."""

import random
from fractions import Fraction as F

import pytest

from poacert.linprog import (
    EQ,
    FREE,
    GE,
    INFEASIBLE,
    LE,
    MAXIMIZE,
    MINIMIZE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    Row,
    dualize,
    solve,
    to_fixed_format,
)

VALUE_RTOL = 1e-7
FEAS_ATOL = 1e-9


def lp_prod_mix():
    # max 3x+2y st x+y<=4, x+3y<=6
    return LinearProgram(
        MAXIMIZE,
        ["x", "y"],
        {"x": 3, "y": 2},
        [Row({"x": 1, "y": 1}, LE, 4, "cap"), Row({"x": 1, "y": 3}, LE, 6, "labor")],
    )


def test_maximize_basic():
    r = solve(lp_prod_mix())
    assert r.status == OPTIMAL
    assert r.value == pytest.approx(12.0)
    assert r.primal["x"] == pytest.approx(4.0)
    assert r.primal["y"] == pytest.approx(0.0)
    # binding row carries the whole objective
    assert r.duals["cap"] == pytest.approx(3.0)
    assert r.duals["labor"] == pytest.approx(0.0)


def test_exact_mode_fractions():
    r = solve(lp_prod_mix(), exact=True)
    assert r.status == OPTIMAL
    assert r.value == F(12)
    assert r.primal["x"] == F(4)
    assert isinstance(r.value, F)


def test_minimize_with_free_variable():
    lp = LinearProgram(
        MINIMIZE,
        ["x", "z"],
        {"x": 1, "z": 2},
        [Row({"x": 1, "z": 1}, EQ, 3, "bal"), Row({"z": 1}, GE, -5, "floor")],
        bounds={"z": FREE},
    )
    r = solve(lp, exact=True)
    assert r.status == OPTIMAL
    assert r.value == F(-2)
    assert r.primal == {"x": F(8), "z": F(-5)}
    assert r.duals["bal"] == F(1)
    assert r.duals["floor"] == F(1)


def test_infeasible_and_unbounded():
    bad = LinearProgram(
        MAXIMIZE,
        ["x"],
        {"x": 1},
        [Row({"x": 1}, LE, 1, "a"), Row({"x": 1}, GE, 2, "b")],
    )
    assert solve(bad).status == INFEASIBLE
    ray = LinearProgram(MAXIMIZE, ["x"], {"x": 1}, [Row({"x": -1}, LE, 1, "a")])
    assert solve(ray).status == UNBOUNDED
    assert solve(ray, exact=True).status == UNBOUNDED


def test_no_rows():
    lp = LinearProgram(MAXIMIZE, ["x"], {"x": 1}, [])
    assert solve(lp).status == UNBOUNDED
    lp2 = LinearProgram(MINIMIZE, ["x"], {"x": 1}, [])
    r = solve(lp2)
    assert r.status == OPTIMAL and r.value == 0.0


def test_double_bounds_and_nonpos():
    lp = LinearProgram(
        MAXIMIZE,
        ["u", "v"],
        {"u": 1, "v": 1},
        [Row({"u": 1, "v": -1}, LE, 10, "r")],
        bounds={"u": (2, 5), "v": (None, 0)},
    )
    r = solve(lp, exact=True)
    assert r.status == OPTIMAL
    assert r.primal["u"] == F(5)
    assert r.primal["v"] == F(0)
    assert r.value == F(5)


def test_beale_cycling_instance():
    # classic degenerate instance; Bland fallback must terminate at 1/20
    lp = LinearProgram(
        MAXIMIZE,
        ["x1", "x2", "x3", "x4"],
        {"x1": F(3, 4), "x2": -150, "x3": F(1, 50), "x4": -6},
        [
            Row({"x1": F(1, 4), "x2": -60, "x3": F(-1, 25), "x4": 9}, LE, 0, "r1"),
            Row({"x1": F(1, 2), "x2": -90, "x3": F(-1, 50), "x4": 3}, LE, 0, "r2"),
            Row({"x3": 1}, LE, 1, "r3"),
        ],
    )
    r = solve(lp, exact=True)
    assert r.status == OPTIMAL
    assert r.value == F(1, 20)


def test_redundant_rows_get_consistent_duals():
    lp = LinearProgram(
        MAXIMIZE,
        ["x", "y"],
        {"x": 1, "y": 1},
        [
            Row({"x": 1, "y": 1}, EQ, 2, "e1"),
            Row({"x": 2, "y": 2}, EQ, 4, "e2"),  # dependent copy
            Row({"x": 1}, LE, 2, "cap"),
        ],
    )
    r = solve(lp, exact=True)
    assert r.status == OPTIMAL
    assert r.value == F(2)
    assert set(r.duals) == {"e1", "e2", "cap"}
    rhs = {"e1": 2, "e2": 4, "cap": 2}
    assert sum(r.duals[k] * rhs[k] for k in rhs) == F(2)


def test_dualize_shapes_and_involution():
    lp = lp_prod_mix()
    d = dualize(lp)
    assert d.sense == MINIMIZE
    assert d.variables == ("cap", "labor")
    assert [row.label for row in d.rows] == ["x", "y"]
    assert [row.relation for row in d.rows] == [GE, GE]
    dd = dualize(d)
    assert dd.sense == MAXIMIZE
    assert dd.variables == ("x", "y")
    assert solve(dd, exact=True).value == F(12)


def test_dual_values_match_dual_solve():
    lp = lp_prod_mix()
    rp = solve(lp, exact=True)
    rd = solve(dualize(lp), exact=True)
    assert rd.status == OPTIMAL
    assert rp.value == rd.value  # strong duality, exactly
    # reported duals of the primal solve are optimal for the dual program
    assert sum(rd.primal[k] * {"cap": 4, "labor": 6}[k] for k in rd.primal) == F(12)


def _random_feasible_lp(rng, m=4, n=5):
    # b chosen as A@x0 + margin so the program is feasible by construction
    names = [f"x{j}" for j in range(n)]
    A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
    x0 = [rng.randint(0, 3) for _ in range(n)]
    rows = []
    for i in range(m):
        lhs = sum(A[i][j] * x0[j] for j in range(n))
        rows.append(Row(dict(zip(names, A[i])), LE, lhs + rng.randint(0, 3), f"r{i}"))
    c = {nm: rng.randint(-3, 3) for nm in names}
    # cap the box so everything stays bounded
    rows.append(Row({nm: 1 for nm in names}, LE, 25, "box"))
    return LinearProgram(MAXIMIZE, names, c, rows)


def test_strong_duality_random():
    rng = random.Random(20260818)
    for _ in range(60):
        lp = _random_feasible_lp(rng)
        rp = solve(lp, exact=True)
        assert rp.status == OPTIMAL
        rd = solve(dualize(lp), exact=True)
        assert rd.status == OPTIMAL
        assert rp.value == rd.value
        # weak duality identity on reported duals
        assert sum(rp.duals[row.label] * row.rhs for row in lp.rows) == rp.value
        # complementary slackness
        for row in lp.rows:
            slack = row.rhs - sum(
                row.coeffs.get(v, 0) * rp.primal[v] for v in lp.variables
            )
            assert rp.duals[row.label] * slack == 0 or abs(rp.duals[row.label] * slack) == 0


def test_float_tracks_exact():
    rng = random.Random(7)
    for _ in range(25):
        lp = _random_feasible_lp(rng, m=3, n=4)
        rf = solve(lp)
        re = solve(lp, exact=True)
        assert rf.status == re.status == OPTIMAL
        assert rf.value == pytest.approx(float(re.value), rel=VALUE_RTOL, abs=1e-9)


def test_validation_errors():
    with pytest.raises(ValueError):
        LinearProgram(MAXIMIZE, ["x"], {"y": 1}, [])
    with pytest.raises(ValueError):
        LinearProgram(MAXIMIZE, ["x", "x"], {}, [])
    with pytest.raises(ValueError):
        LinearProgram(MAXIMIZE, ["x"], {}, [Row({"x": 1}, "<", 0, "r")])
    with pytest.raises(ValueError):
        LinearProgram(
            MAXIMIZE, ["x"], {}, [Row({"x": 1}, LE, 0, "r"), Row({"x": 1}, LE, 1, "r")]
        )
    with pytest.raises(ValueError):
        LinearProgram(MAXIMIZE, ["x"], {}, [], bounds={"x": (3, 1)})


def test_fixed_format_export():
    txt = to_fixed_format(lp_prod_mix())
    assert txt.startswith("* problem:")
    for section in ("ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA", "OBJSENSE"):
        assert section in txt
    # every declared row appears with its relation code
    assert " L  R0000000" in txt
    assert txt.endswith("ENDATA\n")
