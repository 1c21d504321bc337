"""Exact linear programming over rationals.

A small two-phase simplex on ``fractions.Fraction`` data with Bland's
anti-cycling rule.  No floating point enters this module: optimal values,
primal/dual vectors and infeasibility certificates are exact, so strict
inequalities read off them (the whole point of the state-independence test)
cannot be misclassified at the boundary.

Constraint senses are the strings ``">="``, ``"<="`` and ``"=="``; all
variables are nonnegative.  Dual sign convention for a minimization problem:
``y_i >= 0`` on ``>=`` rows, ``y_i <= 0`` on ``<=`` rows, free on ``==``
rows, so that ``y . b <= c . x`` for every feasible x (weak duality, exact).
An infeasible program yields a Farkas vector with the same sign convention
satisfying ``y^T A <= 0`` componentwise and ``y . b > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

GE = ">="
LE = "<="
EQ = "=="

_SENSES = (GE, LE, EQ)


class LpShapeError(ValueError):
    """Objective, rows, senses and right-hand sides disagree in size."""


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError(f"exact LP data must be int or Fraction, got float {x!r}")
    return Fraction(x)


@dataclass
class LinearProgram:
    """minimize objective . x  subject to  rows x (sense) rhs,  x >= 0."""

    objective: list[Fraction]
    rows: list[list[Fraction]]
    senses: list[str]
    rhs: list[Fraction]

    def __post_init__(self):
        self.objective = [_frac(c) for c in self.objective]
        self.rows = [[_frac(a) for a in row] for row in self.rows]
        self.rhs = [_frac(b) for b in self.rhs]
        nv = len(self.objective)
        if nv < 1:
            raise LpShapeError("LP needs at least one variable")
        if not (len(self.rows) == len(self.senses) == len(self.rhs)):
            raise LpShapeError(
                f"{len(self.rows)} rows, {len(self.senses)} senses, {len(self.rhs)} rhs")
        for i, row in enumerate(self.rows):
            if len(row) != nv:
                raise LpShapeError(f"row {i} has {len(row)} entries, expected {nv}")
        for s in self.senses:
            if s not in _SENSES:
                raise LpShapeError(f"unknown sense {s!r}")

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass
class LpSolution:
    status: str                                   # "optimal" | "infeasible" | "unbounded"
    x: Optional[list[Fraction]] = None
    objective_value: Optional[Fraction] = None
    duals: Optional[list[Fraction]] = None        # per original row, see module doc
    farkas: Optional[list[Fraction]] = None       # infeasibility certificate
    pivots: int = 0


def check_feasible(lp: LinearProgram, point: Sequence) -> bool:
    """Exact satisfaction of every constraint and the nonnegativity bounds."""
    if len(point) != lp.num_vars:
        raise LpShapeError(f"point has {len(point)} entries, expected {lp.num_vars}")
    x = [_frac(v) for v in point]
    if any(v < 0 for v in x):
        return False
    for row, sense, b in zip(lp.rows, lp.senses, lp.rhs):
        lhs = sum(a * v for a, v in zip(row, x) if a)
        if sense == GE and not lhs >= b:
            return False
        if sense == LE and not lhs <= b:
            return False
        if sense == EQ and lhs != b:
            return False
    return True


class _Tableau:
    """Dense simplex tableau; initial basis columns double as B^{-1} tracker."""

    def __init__(self, lp: LinearProgram):
        m, nv = len(lp.rows), lp.num_vars
        self.m, self.nv = m, nv
        self.row_sign = [1] * m

        # slack/surplus column per inequality row
        self.slack_col = [-1] * m
        ncols = nv
        for i, sense in enumerate(lp.senses):
            if sense != EQ:
                self.slack_col[i] = ncols
                ncols += 1
        self.art_col = [-1] * m
        self.ncols_noart = ncols

        rows = []
        rhs = []
        for i in range(m):
            row = [Fraction(0)] * ncols
            for j, a in enumerate(lp.rows[i]):
                row[j] = a
            if lp.senses[i] == LE:
                row[self.slack_col[i]] = Fraction(1)
            elif lp.senses[i] == GE:
                row[self.slack_col[i]] = Fraction(-1)
            b = lp.rhs[i]
            if b < 0:
                self.row_sign[i] = -1
                row = [-a for a in row]
                b = -b
            rows.append(row)
            rhs.append(b)

        # artificials where the slack cannot start in the basis
        self.basis = [-1] * m
        for i in range(m):
            sc = self.slack_col[i]
            if sc >= 0 and rows[i][sc] == 1:
                self.basis[i] = sc
        n_art = sum(1 for b in self.basis if b < 0)
        if n_art:
            for i in range(m):
                if self.basis[i] < 0:
                    self.art_col[i] = ncols
                    self.basis[i] = ncols
                    ncols += 1
            for row in rows:
                row.extend([Fraction(0)] * n_art)
            for i in range(m):
                if self.art_col[i] >= 0:
                    rows[i][self.art_col[i]] = Fraction(1)
        self.ncols = ncols
        self.rows = rows
        self.rhs = rhs
        # the column that held e_i at the start, used to read off B^{-1}
        self.init_col = [self.art_col[i] if self.art_col[i] >= 0 else self.slack_col[i]
                         for i in range(m)]
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        piv = self.rows[r][j]
        inv = 1 / piv
        self.rows[r] = [a * inv for a in self.rows[r]]
        self.rhs[r] *= inv
        prow = self.rows[r]
        for i in range(self.m):
            if i == r:
                continue
            f = self.rows[i][j]
            if f == 0:
                continue
            row = self.rows[i]
            for k in range(self.ncols):
                if prow[k]:
                    row[k] -= f * prow[k]
            self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, cost: list[Fraction]) -> tuple[list[Fraction], Fraction]:
        """Reduced-cost row and objective value for the current basis."""
        y = [cost[self.basis[i]] for i in range(self.m)]  # c_B in row order
        rc = list(cost)
        obj = Fraction(0)
        for i in range(self.m):
            cb = y[i]
            if cb:
                row = self.rows[i]
                for k in range(self.ncols):
                    if row[k]:
                        rc[k] -= cb * row[k]
                obj += cb * self.rhs[i]
        return rc, obj

    def run_simplex(self, cost: list[Fraction], allowed: int) -> str:
        """Bland's rule minimization over columns < allowed; returns status."""
        while True:
            rc, _ = self.reduced_costs(cost)
            enter = -1
            for j in range(allowed):
                if rc[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            # ratio test; ties broken by lowest basis column index (Bland)
            leave, best, best_var = -1, None, None
            for i in range(self.m):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < best_var):
                        leave, best, best_var = i, ratio, self.basis[i]
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter)

    def dual_values(self, cost: list[Fraction]) -> list[Fraction]:
        """y^T = c_B^T B^{-1}, mapped back to the original row orientation."""
        duals = []
        for i in range(self.m):
            yi = Fraction(0)
            col = self.init_col[i]
            for r in range(self.m):
                cb = cost[self.basis[r]]
                if cb and self.rows[r][col]:
                    yi += cb * self.rows[r][col]
            duals.append(yi * self.row_sign[i])
        return duals


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Exact optimum of a rational LP by two-phase simplex with Bland's rule.

    Deterministic: the same instance always yields the same basis, primal
    point and duals.  Infeasible programs return a Farkas certificate,
    unbounded ones just the status.
    """
    t = _Tableau(lp)

    has_art = any(c >= 0 for c in t.art_col)
    if has_art:
        phase1 = [Fraction(0)] * t.ncols
        for c in t.art_col:
            if c >= 0:
                phase1[c] = Fraction(1)
        status = t.run_simplex(phase1, t.ncols)
        assert status == "optimal"  # phase-1 objective is bounded below by 0
        _, obj1 = t.reduced_costs(phase1)
        if obj1 > 0:
            return LpSolution(status="infeasible",
                              farkas=t.dual_values(phase1), pivots=t.pivots)
        # drive any artificial still basic out of the basis
        for i in range(t.m):
            if t.basis[i] >= t.ncols_noart:
                enter = next((j for j in range(t.ncols_noart) if t.rows[i][j] != 0), None)
                if enter is None:
                    continue  # redundant row; harmless to leave in place
                t.pivot(i, enter)

    cost = [Fraction(0)] * t.ncols
    for j, c in enumerate(lp.objective):
        cost[j] = c
    status = t.run_simplex(cost, t.ncols_noart)
    if status == "unbounded":
        return LpSolution(status="unbounded", pivots=t.pivots)

    x = [Fraction(0)] * lp.num_vars
    for i in range(t.m):
        if t.basis[i] < lp.num_vars:
            x[t.basis[i]] = t.rhs[i]
    value = sum(c * v for c, v in zip(lp.objective, x))
    return LpSolution(status="optimal", x=x, objective_value=value,
                      duals=t.dual_values(cost), pivots=t.pivots)
