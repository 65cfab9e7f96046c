"""Compatible-value-function constraint system and the robust ordinal regression
relations (necessary, strict necessary, incomparability)."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .model import PreferenceStatement, Problem
from .solver import Constraint, LinearProgram, solve_lp

NECESSARY_TOL = 1e-9

# epsilon is a free margin in feasibility/necessity queries; U differences lie
# in [-1, 1] so these bounds never bind at an optimum
EPS_BOUNDS = (-2.0, 2.0)


class IncompatiblePreferences(Exception):
    """No value function satisfies every DM statement with a positive margin."""

    def __init__(self, statements: tuple[PreferenceStatement, ...], margin: float | None):
        self.statements = statements
        self.margin = margin
        detail = "infeasible system" if margin is None else f"max margin {margin:g}"
        super().__init__(f"preference statements admit no compatible value function ({detail})")


def marginal_var(criterion_index: int, point_index: int, prefix: str = "") -> str:
    return f"{prefix}u_{criterion_index}_{point_index}"


def marginal_variables(problem: Problem, prefix: str = "") -> list[tuple[str, float, float]]:
    """One [0,1] variable per (criterion, characteristic point)."""
    out = []
    for i, crit in enumerate(problem.criteria):
        for k in range(len(crit.points)):
            out.append((marginal_var(i, k, prefix), 0.0, 1.0))
    return out


def u_coeffs(problem: Problem, alternative: str, prefix: str = "") -> dict[str, float]:
    """U(a) expanded as a sum of marginal variables."""
    row = problem.performance[problem.index_of(alternative)]
    coeffs: dict[str, float] = {}
    for i, crit in enumerate(problem.criteria):
        name = marginal_var(i, crit.point_index(row[i]), prefix)
        coeffs[name] = coeffs.get(name, 0.0) + 1.0
    return coeffs


def u_diff_coeffs(problem: Problem, a: str, b: str, prefix: str = "") -> dict[str, float]:
    coeffs = u_coeffs(problem, a, prefix)
    for name, coef in u_coeffs(problem, b, prefix).items():
        coeffs[name] = coeffs.get(name, 0.0) - coef
    return coeffs


def structural_rows(problem: Problem, prefix: str = "") -> list[Constraint]:
    """Monotonicity per adjacent point pair, zero at alpha, unit normalization."""
    rows = []
    for i, crit in enumerate(problem.criteria):
        for k in range(len(crit.points) - 1):
            rows.append(
                Constraint(
                    {marginal_var(i, k + 1, prefix): 1.0, marginal_var(i, k, prefix): -1.0},
                    ">=",
                    0.0,
                )
            )
    for i in range(len(problem.criteria)):
        rows.append(Constraint({marginal_var(i, 0, prefix): 1.0}, "=", 0.0))
    rows.append(
        Constraint(
            {
                marginal_var(i, len(crit.points) - 1, prefix): 1.0
                for i, crit in enumerate(problem.criteria)
            },
            "=",
            1.0,
        )
    )
    return rows


def preference_rows(
    problem: Problem,
    statements: list[PreferenceStatement] | tuple[PreferenceStatement, ...],
    prefix: str = "",
    eps_value: float | None = None,
) -> list[Constraint]:
    """One row per DM statement; strict rows carry the shared margin.

    With ``eps_value=None`` the margin stays symbolic (variable ``eps``);
    otherwise it is bound to the given constant.
    """
    rows = []
    for st in statements:
        coeffs = u_diff_coeffs(problem, st.a, st.b, prefix)
        if st.kind == "strict":
            if eps_value is None:
                coeffs["eps"] = coeffs.get("eps", 0.0) - 1.0
                rows.append(Constraint(coeffs, ">=", 0.0))
            else:
                rows.append(Constraint(coeffs, ">=", eps_value))
        else:
            rows.append(Constraint(coeffs, "=", 0.0))
    return rows


@dataclass(frozen=True)
class ConstraintSystem:
    """All constraints a compatible value function satisfies, with symbolic margin."""

    problem: Problem
    statements: tuple[PreferenceStatement, ...]
    constraints: tuple[Constraint, ...]

    def to_lp(
        self,
        objective: dict[str, float],
        sense: str,
        extra: list[Constraint] | None = None,
    ) -> LinearProgram:
        lp = LinearProgram()
        for name, lo, hi in marginal_variables(self.problem):
            lp.add_variable(name, lo, hi)
        lp.add_variable("eps", *EPS_BOUNDS)
        lp.constraints = list(self.constraints) + list(extra or [])
        lp.set_objective(objective, sense)
        return lp


def base_system(problem: Problem, statements: list[PreferenceStatement]) -> ConstraintSystem:
    """Monotonicity + zero-at-alpha + normalization + one row per DM statement."""
    for st in statements:
        problem.index_of(st.a)
        problem.index_of(st.b)
    rows = structural_rows(problem) + preference_rows(problem, statements)
    return ConstraintSystem(
        problem=problem,
        statements=tuple(statements),
        constraints=tuple(rows),
    )


def max_margin(system: ConstraintSystem, extra: list[Constraint] | None = None) -> float | None:
    """max eps over the system (plus optional rows); None when infeasible."""
    result = solve_lp(system.to_lp({"eps": 1.0}, "max", extra))
    if result.status != "optimal":
        return None
    return result.objective


def check_compatibility(system: ConstraintSystem) -> float:
    """Largest shared margin of the DM statements; raises when not positive."""
    margin = max_margin(system)
    if margin is None or margin <= NECESSARY_TOL:
        raise IncompatiblePreferences(system.statements, margin)
    return margin


def is_necessarily_preferred(system: ConstraintSystem, problem: Problem, a: str, b: str) -> bool:
    """True iff no compatible function ranks b strictly above a."""
    if a == b:
        problem.index_of(a)
        return True
    challenge = dict(u_diff_coeffs(problem, b, a))
    challenge["eps"] = challenge.get("eps", 0.0) - 1.0
    margin = max_margin(system, [Constraint(challenge, ">=", 0.0)])
    return margin is None or margin <= NECESSARY_TOL


def is_possibly_preferred(system: ConstraintSystem, problem: Problem, a: str, b: str) -> bool:
    """True iff some compatible function weakly ranks a above b."""
    if a == b:
        problem.index_of(a)
        return True
    challenge = u_diff_coeffs(problem, a, b)
    margin = max_margin(system, [Constraint(challenge, ">=", 0.0)])
    return margin is not None and margin > NECESSARY_TOL


@dataclass(frozen=True)
class RelationBundle:
    alternatives: tuple[str, ...]
    necessary: tuple[tuple[bool, ...], ...]
    strict: tuple[tuple[bool, ...], ...]
    incomparable: tuple[tuple[bool, ...], ...]
    d_pairs: tuple[tuple[str, str], ...]

    def necessary_count(self) -> int:
        return sum(sum(row) for row in self.necessary)

    def strict_pairs(self) -> tuple[tuple[str, str], ...]:
        alts = self.alternatives
        return tuple(
            (alts[i], alts[j])
            for i in range(len(alts))
            for j in range(len(alts))
            if self.strict[i][j]
        )


def compute_relations(
    problem: Problem,
    statements: list[PreferenceStatement],
    jobs: int = 1,
) -> RelationBundle:
    """Pairwise necessary-preference tests over all ordered pairs."""
    alts = problem.alternatives
    n = len(alts)
    if n == 1:
        # no pairs to compare; normalization is not even satisfiable here
        return RelationBundle(
            alternatives=alts,
            necessary=((True,),),
            strict=((False,),),
            incomparable=((False,),),
            d_pairs=(),
        )
    system = base_system(problem, statements)
    check_compatibility(system)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]

    def test(pair):
        i, j = pair
        return is_necessarily_preferred(system, problem, alts[i], alts[j])

    if jobs > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            answers = list(pool.map(test, pairs))
    else:
        answers = [test(p) for p in pairs]

    necessary = [[i == j for j in range(n)] for i in range(n)]
    for (i, j), yes in zip(pairs, answers):
        necessary[i][j] = yes

    strict = [
        [necessary[i][j] and not necessary[j][i] for j in range(n)]
        for i in range(n)
    ]
    incomparable = [
        [not necessary[i][j] and not necessary[j][i] if i != j else False for j in range(n)]
        for i in range(n)
    ]
    d_pairs = tuple(
        (alts[i], alts[j]) for i in range(n) for j in range(n) if incomparable[i][j]
    )
    return RelationBundle(
        alternatives=alts,
        necessary=tuple(tuple(row) for row in necessary),
        strict=tuple(tuple(row) for row in strict),
        incomparable=tuple(tuple(row) for row in incomparable),
        d_pairs=d_pairs,
    )
