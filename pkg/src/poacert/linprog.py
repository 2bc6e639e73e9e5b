"""Dense linear programming with explicit duals.

Self-contained primal simplex (two-phase, tableau form) plus a mechanical
dualizer.  Two arithmetic backends share one kernel: float64 numpy arrays,
or object arrays of fractions.Fraction when exact=True.  The solver never
reports OPTIMAL on an inconclusive run; it raises SolverError instead.

Conventions
-----------
* Rows are labeled; relations are "<=", "=", ">=".
* Variable bounds default to (0, +inf); FREE means (-inf, +inf).
* Dual values follow the textbook convention for the stated sense:
  for a MAX program, "<=" rows get duals >= 0, ">=" rows get duals <= 0,
  "=" rows are free; for a MIN program the signs swap.  With default
  bounds, sum(dual_i * rhs_i) equals the optimal value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

MAXIMIZE = "max"
MINIMIZE = "min"

LE = "<="
EQ = "="
GE = ">="

OPTIMAL = "OPTIMAL"
INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"

# switch to Bland's entering rule after this many consecutive degenerate pivots
DEGENERATE_STREAK = 40


class SolverError(Exception):
    """Iteration cap hit or internal inconsistency; result is unusable."""


@dataclass(frozen=True)
class Row:
    coeffs: Mapping[str, object]
    relation: str
    rhs: object
    label: str


@dataclass
class LinearProgram:
    sense: str
    variables: Sequence[str]
    objective: Mapping[str, object]
    rows: Sequence[Row]
    bounds: Mapping[str, tuple] = field(default_factory=dict)
    name: str = "lp"

    def __post_init__(self):
        if self.sense not in (MAXIMIZE, MINIMIZE):
            raise ValueError(f"unknown sense {self.sense!r}")
        self.variables = tuple(self.variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        declared = set(self.variables)
        for v in self.objective:
            if v not in declared:
                raise ValueError(f"objective references undeclared variable {v!r}")
        labels = set()
        for row in self.rows:
            if row.relation not in (LE, EQ, GE):
                raise ValueError(f"row {row.label!r}: unknown relation {row.relation!r}")
            if row.label in labels:
                raise ValueError(f"duplicate row label {row.label!r}")
            labels.add(row.label)
            for v in row.coeffs:
                if v not in declared:
                    raise ValueError(f"row {row.label!r} references undeclared variable {v!r}")
        for v, (lo, hi) in self.bounds.items():
            if v not in declared:
                raise ValueError(f"bound on undeclared variable {v!r}")
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"crossing bounds on {v!r}")

    def bound(self, v: str) -> tuple:
        return self.bounds.get(v, (0, None))


FREE = (None, None)


@dataclass
class SolveReport:
    status: str
    value: object
    primal: dict
    duals: dict
    iterations: int
    exact: bool

    def primal_vector(self, variables: Sequence[str]) -> list:
        return [self.primal.get(v, 0) for v in variables]


# ============================================================
# standard-form assembly
# ============================================================


def _convert(x, exact: bool):
    if exact:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        return Fraction(x)  # exact binary value of a float
    return float(x)


class _Standardizer:
    """Rewrites an LP into max c'x, Ax R b, x >= 0 and maps solutions back.

    Each original variable becomes one column (possibly shifted or mirrored)
    or two columns when free.  Finite upper bounds become internal rows.
    """

    def __init__(self, lp: LinearProgram, exact: bool):
        self.lp = lp
        self.exact = exact
        zero = Fraction(0) if exact else 0.0
        one = Fraction(1) if exact else 1.0
        self.zero, self.one = zero, one
        self.columns = []  # (var, kind, const) kind in {pos, shifted, mirrored, split+ , split-}
        self.col_of_var = {}
        self.obj_const = zero
        self.extra_rows = []  # (coeffs-by-col, relation, rhs) for finite upper bounds
        for v in lp.variables:
            lo, hi = lp.bound(v)
            lo = None if lo is None else _convert(lo, exact)
            hi = None if hi is None else _convert(hi, exact)
            if lo is not None and hi is None:
                kind = "pos" if lo == 0 else "shifted"
                self.col_of_var[v] = (len(self.columns),)
                self.columns.append((v, kind, lo))
            elif lo is None and hi is not None:
                self.col_of_var[v] = (len(self.columns),)
                self.columns.append((v, "mirrored", hi))
            elif lo is None and hi is None:
                self.col_of_var[v] = (len(self.columns), len(self.columns) + 1)
                self.columns.append((v, "split+", zero))
                self.columns.append((v, "split-", zero))
            else:  # both finite
                self.col_of_var[v] = (len(self.columns),)
                self.columns.append((v, "shifted", lo))
                self.extra_rows.append(({len(self.columns) - 1: one}, LE, hi - lo))

    def expand(self, coeffs: Mapping[str, object]) -> tuple[dict, object]:
        """Return (col -> coefficient, constant) for a linear form."""
        out: dict[int, object] = {}
        const = self.zero
        for v, c in coeffs.items():
            c = _convert(c, self.exact)
            if c == 0:
                continue
            cols = self.col_of_var[v]
            _, kind, base = self.columns[cols[0]]
            if kind == "pos":
                out[cols[0]] = out.get(cols[0], self.zero) + c
            elif kind == "shifted":
                out[cols[0]] = out.get(cols[0], self.zero) + c
                const += c * base
            elif kind == "mirrored":
                out[cols[0]] = out.get(cols[0], self.zero) - c
                const += c * base
            else:  # split
                out[cols[0]] = out.get(cols[0], self.zero) + c
                out[cols[1]] = out.get(cols[1], self.zero) - c
        return out, const

    def recover(self, colvals: Sequence) -> dict:
        prim = {}
        for v in self.lp.variables:
            cols = self.col_of_var[v]
            _, kind, base = self.columns[cols[0]]
            if kind == "pos":
                prim[v] = colvals[cols[0]]
            elif kind == "shifted":
                prim[v] = base + colvals[cols[0]]
            elif kind == "mirrored":
                prim[v] = base - colvals[cols[0]]
            else:
                prim[v] = colvals[cols[0]] - colvals[cols[1]]
        return prim


# ============================================================
# simplex kernel
# ============================================================


class _Tableau:
    def __init__(self, A, b, relations, n_struct, exact, tol):
        self.exact = exact
        self.tol = Fraction(0) if exact else tol
        self.m = len(b)
        zero = Fraction(0) if exact else 0.0
        one = Fraction(1) if exact else 1.0
        self.sign = [one] * self.m
        # normalize rhs >= 0
        rels = list(relations)
        for i in range(self.m):
            if b[i] < 0:
                b[i] = -b[i]
                A[i] = [-a for a in A[i]]
                self.sign[i] = -one
                rels[i] = {LE: GE, GE: LE, EQ: EQ}[rels[i]]
        self.n_struct = n_struct
        ncols = self.n_struct
        self.slack_col = [None] * self.m
        self.art_col = [None] * self.m
        for i, rel in enumerate(rels):
            if rel == LE:
                self.slack_col[i] = ncols
                ncols += 1
            elif rel == GE:
                self.slack_col[i] = ncols
                self.art_col[i] = ncols + 1
                ncols += 2
            else:
                self.art_col[i] = ncols
                ncols += 1
        self.ncols = ncols
        dtype = object if exact else np.float64
        M = np.zeros((self.m, ncols + 1), dtype=dtype)
        if exact:
            M[:, :] = Fraction(0)
        for i in range(self.m):
            for j, a in enumerate(A[i]):
                M[i, j] = a
            if self.slack_col[i] is not None:
                M[i, self.slack_col[i]] = one if rels[i] == LE else -one
            if self.art_col[i] is not None:
                M[i, self.art_col[i]] = one
            M[i, ncols] = b[i]
        self.M = M
        self.basis = [
            self.art_col[i] if self.art_col[i] is not None else self.slack_col[i]
            for i in range(self.m)
        ]
        self.artificials = {c for c in self.art_col if c is not None}
        self.row_alive = [True] * self.m
        self.iterations = 0

    # ---- pivoting ----

    def _pivot(self, r, j, B):
        M = self.M
        piv = M[r, j]
        M[r] = M[r] / piv
        col = M[:, j].copy()
        col[r] = self.zero_scalar()
        # rank-1 elimination of column j everywhere but the pivot row
        M -= np.outer(col, M[r])
        if B[j] != 0:
            B -= B[j] * M[r]
        if not self.exact:
            M[:, j] = 0.0
            M[r, j] = 1.0
            B[j] = 0.0
        self.basis[r] = j
        self.iterations += 1

    def zero_scalar(self):
        return Fraction(0) if self.exact else 0.0

    def _reduced_row(self, costs):
        """Build the z - c row (plus objective value cell) for given costs."""
        dtype = object if self.exact else np.float64
        B = np.zeros(self.M.shape[1], dtype=dtype)
        if self.exact:
            B[:] = Fraction(0)
        for j, c in enumerate(costs):
            if c != 0:
                B[j] = -c
        for r in range(self.m):
            if not self.row_alive[r]:
                continue
            jb = self.basis[r]
            if B[jb] != 0:
                B -= B[jb] * self.M[r]
        return B

    def _ratio_row(self, j, bland=False):
        """Leaving row for entering column j, or None if unbounded.

        Ties on the minimum ratio are rampant in degenerate programs; among
        tied rows the largest pivot entry wins (tiny pivots shred float
        tableaus), except under Bland's rule in exact mode, where the
        lowest basis index keeps the termination guarantee."""
        best_ratio = None
        M = self.M
        rows = []
        for i in range(self.m):
            if not self.row_alive[i]:
                continue
            a = M[i, j]
            if a <= self.tol:
                continue
            ratio = M[i, -1] / a
            rows.append((i, ratio, a))
            if best_ratio is None or ratio < best_ratio:
                best_ratio = ratio
        if best_ratio is None:
            return None
        if self.exact:
            tied = [t for t in rows if t[1] == best_ratio]
            if bland:
                return min(tied, key=lambda t: self.basis[t[0]])[0]
        else:
            slack = self.tol * (1 + abs(best_ratio))
            tied = [t for t in rows if t[1] <= best_ratio + slack]
        return max(tied, key=lambda t: (t[2], -self.basis[t[0]]))[0]

    def run(self, costs, banned, max_iters, ray_free=False):
        """Maximize costs'x from the current basis.  Returns status string.

        ray_free callers guarantee the objective is bounded, so a column
        with no admissible pivot row is float dust, not a ray; it gets
        retired instead of triggering an UNBOUNDED verdict.
        """
        B = self._reduced_row(costs)
        bland = False
        streak = 0
        dead = set()
        while True:
            if self.iterations > max_iters:
                raise SolverError(f"iteration cap {max_iters} exceeded")
            enter = None
            if bland:
                for j in range(self.ncols):
                    if j in banned or j in dead:
                        continue
                    if B[j] < -self.tol:
                        enter = j
                        break
            else:
                best = -self.tol
                for j in range(self.ncols):
                    if j in banned or j in dead:
                        continue
                    if B[j] < best:
                        best = B[j]
                        enter = j
            if enter is None:
                self._B = B
                return OPTIMAL
            leave = self._ratio_row(enter, bland)
            if leave is None:
                if ray_free:
                    dead.add(enter)
                    continue
                self._B = B
                return UNBOUNDED
            degenerate = self.M[leave, -1] <= self.tol
            self._pivot(leave, enter, B)
            if degenerate:
                streak += 1
                if streak >= DEGENERATE_STREAK:
                    bland = True
            else:
                streak = 0

    def phase1(self, max_iters):
        if not self.artificials:
            return True
        costs = [self.zero_scalar()] * self.ncols
        for c in self.artificials:
            costs[c] = -(Fraction(1) if self.exact else 1.0)
        status = self.run(costs, banned=frozenset(), max_iters=max_iters,
                          ray_free=True)
        if status != OPTIMAL:  # phase-1 objective is bounded by 0
            raise SolverError("phase 1 reported unbounded")
        if self._B[-1] < -max(self.tol, Fraction(0) if self.exact else 1e-9):
            return False
        # drive zero-level artificials out of the basis; drop dependent rows
        for r in range(self.m):
            if not self.row_alive[r] or self.basis[r] not in self.artificials:
                continue
            target = None
            for j in range(self.ncols):
                if j in self.artificials:
                    continue
                a = self.M[r, j]
                if a > self.tol or a < -self.tol:
                    target = j
                    break
            if target is not None:
                self._pivot(r, target, self._B)
            else:
                self.row_alive[r] = False
        return True

    def column_values(self):
        vals = [self.zero_scalar()] * self.ncols
        for r in range(self.m):
            if self.row_alive[r]:
                vals[self.basis[r]] = self.M[r, -1]
        return vals


def solve(
    lp: LinearProgram,
    exact: bool = False,
    tol: float = 1e-9,
    max_iters: int | None = None,
) -> SolveReport:
    """Two-phase simplex.  Raises SolverError rather than guessing."""
    std = _Standardizer(lp, exact)
    zero = std.zero
    sense_flip = -std.one if lp.sense == MINIMIZE else std.one

    A, b, rels, row_scale = [], [], [], []
    for row in lp.rows:
        cols, const = std.expand(row.coeffs)
        dense = [zero] * len(std.columns)
        for j, c in cols.items():
            dense[j] = c
        rhs = _convert(row.rhs, exact) - const
        # equilibrate: float tolerances are absolute, so rows must share a
        # scale for them to mean anything
        s = std.one
        if not exact:
            biggest = max((abs(c) for c in dense), default=0.0)
            if biggest > 0:
                s = 1.0 / biggest
        A.append([c * s for c in dense] if s != 1 else dense)
        b.append(rhs * s)
        rels.append(row.relation)
        row_scale.append(s)
    for cols, rel, rhs in std.extra_rows:
        dense = [zero] * len(std.columns)
        for j, c in cols.items():
            dense[j] = c
        A.append(dense)
        b.append(rhs)
        rels.append(rel)
    n_original_rows = len(lp.rows)

    obj_cols, obj_const = std.expand(lp.objective)
    costs = [zero] * len(std.columns)
    for j, c in obj_cols.items():
        costs[j] = c * sense_flip

    tab = _Tableau(A, b, rels, len(std.columns), exact, tol)
    if max_iters is None:
        max_iters = 2000 + 100 * (tab.m + tab.ncols)
    if not tab.phase1(max_iters):
        return SolveReport(INFEASIBLE, None, {}, {}, tab.iterations, exact)
    full_costs = costs + [zero] * (tab.ncols - len(costs))
    status = tab.run(full_costs, banned=frozenset(tab.artificials), max_iters=max_iters)
    if status == UNBOUNDED:
        return SolveReport(UNBOUNDED, None, {}, {}, tab.iterations, exact)

    colvals = tab.column_values()
    primal = std.recover(colvals)
    value = sense_flip * (tab._B[-1]) + obj_const
    if not exact:
        primal = {v: float(x) for v, x in primal.items()}
        value = float(value)

    # duals off the identity columns, undoing row sign normalization and
    # equilibration
    duals = {}
    B = tab._B
    for i in range(n_original_rows):
        label = lp.rows[i].label
        if not tab.row_alive[i]:
            duals[label] = zero  # dependent row, any consistent dual works
            continue
        idcol = tab.art_col[i] if tab.art_col[i] is not None else tab.slack_col[i]
        y = B[idcol] * tab.sign[i] * sense_flip * row_scale[i]
        duals[label] = y if exact else float(y)
    return SolveReport(OPTIMAL, value, primal, duals, tab.iterations, exact)


# ============================================================
# point feasibility
# ============================================================


def evaluate_row(row: Row, point: Mapping) -> object:
    return sum(a * point.get(v, 0) for v, a in row.coeffs.items())


def feasibility_report(lp: LinearProgram, point: Mapping, tol=1e-9, check_bounds=True):
    """(ok, first_violated_label, worst_violation) of a candidate point.

    Rows are checked in declaration order, then variable bounds (labeled
    bound[var]).  Variables absent from the point count as 0."""
    first = None
    worst = 0
    for row in lp.rows:
        lhs = evaluate_row(row, point)
        if row.relation == LE:
            v = lhs - row.rhs
        elif row.relation == GE:
            v = row.rhs - lhs
        else:
            v = abs(lhs - row.rhs)
        if v > worst:
            worst = v
        if v > tol and first is None:
            first = row.label
    if check_bounds:
        for var in lp.variables:
            lo, hi = lp.bound(var)
            x = point.get(var, 0)
            for v in ((lo - x) if lo is not None else 0, (x - hi) if hi is not None else 0):
                if v > worst:
                    worst = v
                if v > tol and first is None:
                    first = f"bound[{var}]"
    return first is None, first, worst


# ============================================================
# mechanical dual
# ============================================================

_DUAL_BOUND_MAX = {LE: (0, None), EQ: FREE, GE: (None, 0)}
_DUAL_BOUND_MIN = {GE: (0, None), EQ: FREE, LE: (None, 0)}


def _var_class(lp: LinearProgram, v: str) -> str:
    lo, hi = lp.bound(v)
    if lo == 0 and hi is None:
        return "nonneg"
    if lo is None and hi == 0:
        return "nonpos"
    if lo is None and hi is None:
        return "free"
    raise ValueError(f"dualize requires sign-constrained or free variables, got {lp.bound(v)} on {v!r}")


def dualize(lp: LinearProgram) -> LinearProgram:
    """Textbook dual.  Dual variables are named after primal row labels,
    dual rows after primal variables, so dualize(dualize(lp)) restores the
    original names."""
    primal_max = lp.sense == MAXIMIZE
    dvars = tuple(row.label for row in lp.rows)
    dbounds = {}
    for row in lp.rows:
        bnd = (_DUAL_BOUND_MAX if primal_max else _DUAL_BOUND_MIN)[row.relation]
        if bnd != (0, None):
            dbounds[row.label] = bnd
    # transpose
    col_coeffs: dict[str, dict[str, object]] = {v: {} for v in lp.variables}
    for row in lp.rows:
        for v, a in row.coeffs.items():
            if a != 0:
                col_coeffs[v][row.label] = a
    drows = []
    for v in lp.variables:
        cls = _var_class(lp, v)
        if primal_max:
            rel = {"nonneg": GE, "free": EQ, "nonpos": LE}[cls]
        else:
            rel = {"nonneg": LE, "free": EQ, "nonpos": GE}[cls]
        drows.append(Row(col_coeffs[v], rel, lp.objective.get(v, 0), v))
    dobj = {row.label: row.rhs for row in lp.rows if row.rhs != 0}
    return LinearProgram(
        sense=MINIMIZE if primal_max else MAXIMIZE,
        variables=dvars,
        objective=dobj,
        rows=drows,
        bounds=dbounds,
        name=f"dual({lp.name})",
    )


# ============================================================
# fixed-format text export
# ============================================================


def _num(x) -> str:
    return f"{float(x):.12g}"


def to_fixed_format(lp: LinearProgram) -> str:
    """Fixed-column MPS text.  Names are sanitized to 8 characters; the
    original identifiers are preserved in leading comment lines."""
    rown = {row.label: f"R{i:07d}" for i, row in enumerate(lp.rows)}
    coln = {v: f"C{j:07d}" for j, v in enumerate(lp.variables)}
    out = [f"* problem: {lp.name}"]
    for label, short in rown.items():
        out.append(f"* row {short} = {label}")
    for v, short in coln.items():
        out.append(f"* col {short} = {v}")
    out.append(f"NAME          {lp.name[:8].upper()}")
    out.append("OBJSENSE")
    out.append(f"    {'MAX' if lp.sense == MAXIMIZE else 'MIN'}")
    out.append("ROWS")
    out.append(" N  COST")
    rel_code = {LE: "L", EQ: "E", GE: "G"}
    for row in lp.rows:
        out.append(f" {rel_code[row.relation]}  {rown[row.label]}")
    out.append("COLUMNS")
    for v in lp.variables:
        entries = []
        c = lp.objective.get(v, 0)
        if c != 0:
            entries.append(("COST", c))
        for row in lp.rows:
            a = row.coeffs.get(v, 0)
            if a != 0:
                entries.append((rown[row.label], a))
        for k in range(0, len(entries), 2):
            pair = entries[k : k + 2]
            line = f"    {coln[v]:<10}{pair[0][0]:<10}{_num(pair[0][1]):<12}"
            if len(pair) == 2:
                line += f"  {pair[1][0]:<10}{_num(pair[1][1]):<12}"
            out.append(line.rstrip())
    out.append("RHS")
    for row in lp.rows:
        if row.rhs != 0:
            out.append(f"    RHS       {rown[row.label]:<10}{_num(row.rhs):<12}".rstrip())
    out.append("BOUNDS")
    for v in lp.variables:
        lo, hi = lp.bound(v)
        short = coln[v]
        if lo is None and hi is None:
            out.append(f" FR BND       {short}")
        else:
            if lo is None:
                out.append(f" MI BND       {short}")
            elif lo != 0:
                out.append(f" LO BND       {short:<10}{_num(lo)}")
            if hi is not None:
                out.append(f" UP BND       {short:<10}{_num(hi)}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"
