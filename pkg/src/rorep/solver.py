"""Linear and binary mixed-integer programs over named variables.

``solve_lp`` runs the embedded bounded simplex (deterministic, residuals well
inside 1e-9). ``solve_milp`` delegates the integer search to HiGHS via
scipy.optimize.milp, then fixes the binaries and re-solves the continuous
part with the embedded simplex so reported solutions sit on an exact vertex.
Every optimal result is re-verified against the raw constraint list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, SimplexError, solve_bounded

MAX_BINARIES = 512

RELATIONS = ("<=", "=", ">=")


class ModelError(ValueError):
    """Structurally invalid model (undeclared variable, bad bounds, non-finite rhs)."""


@dataclass(frozen=True)
class Constraint:
    coeffs: dict[str, float]
    relation: str
    rhs: float

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ModelError(f"unknown relation {self.relation!r}")
        if not math.isfinite(self.rhs):
            raise ModelError("constraint rhs must be finite")


@dataclass
class LinearProgram:
    """min/max of a linear objective over box-bounded variables and linear rows."""

    variables: list[tuple[str, float, float]] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, float] = field(default_factory=dict)
    sense: str = "min"

    def add_variable(self, name: str, lower: float = 0.0, upper: float = math.inf):
        self.variables.append((name, lower, upper))

    def add_constraint(self, coeffs: dict[str, float], relation: str, rhs: float):
        self.constraints.append(Constraint(dict(coeffs), relation, rhs))

    def set_objective(self, coeffs: dict[str, float], sense: str):
        if sense not in ("min", "max"):
            raise ModelError(f"objective sense must be min or max, got {sense!r}")
        self.objective = dict(coeffs)
        self.sense = sense

    def validate(self) -> dict[str, int]:
        names = [v[0] for v in self.variables]
        if len(set(names)) != len(names):
            raise ModelError("duplicate variable name")
        index = {name: j for j, name in enumerate(names)}
        for con in self.constraints:
            for name in con.coeffs:
                if name not in index:
                    raise ModelError(f"constraint references undeclared variable {name!r}")
        for name in self.objective:
            if name not in index:
                raise ModelError(f"objective references undeclared variable {name!r}")
        return index


@dataclass
class MixedIntegerProgram:
    base: LinearProgram
    binaries: list[str] = field(default_factory=list)

    def validate(self) -> dict[str, int]:
        index = self.base.validate()
        for name in self.binaries:
            if name not in index:
                raise ModelError(f"binary {name!r} is not a declared variable")
            _, lo, hi = self.base.variables[index[name]]
            if lo != 0.0 or hi != 1.0:
                raise ModelError(f"binary {name!r} must have bounds [0, 1]")
        return index


@dataclass(frozen=True)
class SolveResult:
    status: str  # optimal | infeasible | unbounded
    objective: float | None = None
    assignment: dict[str, float] | None = None

    def value(self, name: str) -> float:
        assert self.assignment is not None
        return self.assignment[name]


def solve_lp(lp: LinearProgram) -> SolveResult:
    """Solve with the embedded bounded simplex."""
    index = lp.validate()
    n = len(lp.variables)
    m = len(lp.constraints)

    lower = np.array([v[1] for v in lp.variables] + [0.0] * m)
    upper = np.array([v[2] for v in lp.variables] + [0.0] * m)
    A = np.zeros((m, n + m))
    b = np.zeros(m)
    for i, con in enumerate(lp.constraints):
        for name, coef in con.coeffs.items():
            A[i, index[name]] += coef
        b[i] = con.rhs
        A[i, n + i] = 1.0  # slack
        if con.relation == "<=":
            lower[n + i], upper[n + i] = 0.0, np.inf
        elif con.relation == ">=":
            lower[n + i], upper[n + i] = -np.inf, 0.0
        # "=" keeps the slack fixed at zero

    sign = 1.0 if lp.sense == "min" else -1.0
    c = np.zeros(n + m)
    for name, coef in lp.objective.items():
        c[index[name]] = sign * coef

    status, x, obj = solve_bounded(c, A, b, lower, upper)
    if status != OPTIMAL:
        return SolveResult(status=status)
    assignment = {name: float(x[index[name]]) for name, _, _ in lp.variables}
    _verify(lp, assignment)
    return SolveResult(status=OPTIMAL, objective=sign * obj, assignment=assignment)


def solve_milp(mip: MixedIntegerProgram) -> SolveResult:
    """Branch-and-bound search (HiGHS) plus exact simplex polish of the optimum."""
    index = mip.validate()
    if not mip.binaries:
        return solve_lp(mip.base)
    if len(mip.binaries) > MAX_BINARIES:
        raise ModelError(f"model has {len(mip.binaries)} binaries (limit {MAX_BINARIES})")

    lp = mip.base
    n = len(lp.variables)
    sign = 1.0 if lp.sense == "min" else -1.0
    c = np.zeros(n)
    for name, coef in lp.objective.items():
        c[index[name]] = sign * coef

    m = len(lp.constraints)
    A = np.zeros((m, n))
    lo = np.full(m, -np.inf)
    hi = np.full(m, np.inf)
    for i, con in enumerate(lp.constraints):
        for name, coef in con.coeffs.items():
            A[i, index[name]] += coef
        if con.relation == "<=":
            hi[i] = con.rhs
        elif con.relation == ">=":
            lo[i] = con.rhs
        else:
            lo[i] = hi[i] = con.rhs

    integrality = np.zeros(n)
    for name in mip.binaries:
        integrality[index[name]] = 1
    bounds = Bounds(
        np.array([v[1] for v in lp.variables]),
        np.array([v[2] for v in lp.variables]),
    )
    constraints = [LinearConstraint(A, lo, hi)] if m else []
    # presolve stays off: the HiGHS build vendored by scipy 1.15 mislabels some
    # feasible equality-row models as infeasible when presolve is enabled
    res = milp(
        c,
        constraints=constraints,
        integrality=integrality,
        bounds=bounds,
        options={"mip_rel_gap": 0.0, "presolve": False},
    )
    if res.status == 2:
        return SolveResult(status=INFEASIBLE)
    if res.status == 3:
        return SolveResult(status=UNBOUNDED)
    if res.status != 0 or res.x is None:
        raise SimplexError(f"MILP search failed: {res.message}")

    fixed = {}
    for name in mip.binaries:
        v = float(res.x[index[name]])
        r = round(v)
        if abs(v - r) > 1e-6:
            raise SimplexError(f"binary {name!r} not integral in MILP solution ({v})")
        fixed[name] = float(r)

    polished = _polish(lp, fixed)
    if polished.status != OPTIMAL:
        raise SimplexError("polish LP disagreed with MILP search")
    _verify(lp, polished.assignment)
    return polished


def _polish(lp: LinearProgram, fixed: dict[str, float]) -> SolveResult:
    """Re-solve with some variables pinned, using the embedded simplex."""
    sub = LinearProgram(sense=lp.sense, objective=dict(lp.objective))
    for name, lo, hi in lp.variables:
        if name in fixed:
            sub.add_variable(name, fixed[name], fixed[name])
        else:
            sub.add_variable(name, lo, hi)
    sub.constraints = list(lp.constraints)
    return solve_lp(sub)


def _verify(lp: LinearProgram, assignment: dict[str, float], tol: float = 1e-9) -> None:
    for name, lo, hi in lp.variables:
        v = assignment[name]
        if v < lo - tol or v > hi + tol:
            raise SimplexError(f"variable {name!r} out of bounds in solution")
    for con in lp.constraints:
        lhs = sum(coef * assignment[name] for name, coef in con.coeffs.items())
        slack = lhs - con.rhs
        scale = max(1.0, abs(con.rhs))
        if con.relation == "<=" and slack > tol * scale:
            raise SimplexError("solution violates a <= constraint")
        if con.relation == ">=" and slack < -tol * scale:
            raise SimplexError("solution violates a >= constraint")
        if con.relation == "=" and abs(slack) > tol * scale:
            raise SimplexError("solution violates an = constraint")


def lp_text(model: LinearProgram | MixedIntegerProgram) -> str:
    """Debug dump: objective, rows, bounds and binaries in a plain text layout."""
    if isinstance(model, MixedIntegerProgram):
        lp, binaries = model.base, list(model.binaries)
    else:
        lp, binaries = model, []
    lines = [f"{lp.sense} " + _expr(lp.objective), "subject to"]
    for i, con in enumerate(lp.constraints):
        lines.append(f"  r{i}: {_expr(con.coeffs)} {con.relation} {con.rhs:g}")
    lines.append("bounds")
    for name, lo, hi in lp.variables:
        lines.append(f"  {lo:g} <= {name} <= {hi:g}")
    if binaries:
        lines.append("binaries")
        lines.append("  " + " ".join(binaries))
    return "\n".join(lines) + "\n"


def _expr(coeffs: dict[str, float]) -> str:
    if not coeffs:
        return "0"
    return " + ".join(f"{v:g} {k}" for k, v in coeffs.items())
