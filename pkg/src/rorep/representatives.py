"""Synthesis of representative value-function sets.

Pipeline: a coverage MILP grows a sufficient set one function at a time
(each call covers as many still-open incomparable pairs as possible), a
minimality MILP finds how many of those functions are removable, and a
discrimination MILP re-derives the final set with the largest common margin.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import (
    NECESSARY_TOL,
    RelationBundle,
    base_system,
    check_compatibility,
    compute_relations,
    marginal_var,
    marginal_variables,
    preference_rows,
    structural_rows,
    u_diff_coeffs,
)
from .model import PreferenceStatement, Problem, ValueFunction
from .solver import Constraint, LinearProgram, MixedIntegerProgram, solve_lp, solve_milp

DEFAULT_EPS = 1e-4
DEFAULT_BIG_M = 10.0


class PipelineError(RuntimeError):
    """A stage hit an infeasible model that compatibility should have excluded."""


class NoCoveringFunction(Exception):
    """No representative function ranks the requested alternative above the other."""


@dataclass(frozen=True)
class SufficientSet:
    functions: tuple[ValueFunction, ...]
    covered: dict[str, tuple[tuple[str, str], ...]]  # label -> directed pairs
    iteration_log: tuple[int, ...]  # remaining |D| after each step

    @property
    def r(self) -> int:
        return len(self.functions)


@dataclass(frozen=True)
class MinimalityResult:
    r: int
    z_star: int
    t: int
    witnesses: tuple[ValueFunction, ...]


@dataclass(frozen=True)
class DiscriminantSet:
    functions: tuple[ValueFunction, ...]
    epsilon_star: float
    coverage: dict[tuple[str, str], tuple[str, ...]]  # pair -> labels representing it

    @property
    def t(self) -> int:
        return len(self.functions)


@dataclass(frozen=True)
class Explanation:
    pair: tuple[str, str]
    label: str
    margin: float
    a_marginals: dict[str, float]  # criterion id -> marginal value at a's score
    b_marginals: dict[str, float]
    differing: tuple[tuple[str, float], ...]  # (criterion id, signed marginal gap)


def _copy_rows(
    problem: Problem,
    statements,
    strict_pairs,
    prefix: str,
    eps_value: float | None,
) -> list[Constraint]:
    """Structural + DM + strict-necessary rows for one value-function copy."""
    rows = structural_rows(problem, prefix)
    rows += preference_rows(problem, statements, prefix, eps_value)
    for a, b in strict_pairs:
        coeffs = u_diff_coeffs(problem, a, b, prefix)
        if eps_value is None:
            coeffs["eps"] = coeffs.get("eps", 0.0) - 1.0
            rows.append(Constraint(coeffs, ">=", 0.0))
        else:
            rows.append(Constraint(coeffs, ">=", eps_value))
    return rows


def _extract_function(problem: Problem, assignment, label: str, prefix: str = "") -> ValueFunction:
    values = {}
    for i, crit in enumerate(problem.criteria):
        vals = []
        for k in range(len(crit.points)):
            v = assignment[marginal_var(i, k, prefix)]
            vals.append(0.0 if abs(v) < 1e-12 else v)
        values[crit.id] = tuple(vals)
    return ValueFunction(label=label, values=values)


def _pair_margin(problem: Problem, func: ValueFunction, a: str, b: str) -> float:
    ia, ib = problem.index_of(a), problem.index_of(b)
    total = 0.0
    for j, crit in enumerate(problem.criteria):
        total += func.marginal(crit, problem.performance[ia][j])
        total -= func.marginal(crit, problem.performance[ib][j])
    return total


def solve_pd(
    problem: Problem,
    statements,
    strict_pairs,
    d_pairs,
    eps_fixed: float = DEFAULT_EPS,
    big_m: float = DEFAULT_BIG_M,
    label: str = "U1",
) -> tuple[ValueFunction, tuple[tuple[str, str], ...]]:
    """Coverage MILP: one compatible function ranking as many pairs of ``d_pairs``
    as possible (binary per pair, big-M deactivation), all strict pairs enforced."""
    if not d_pairs:
        raise PipelineError("coverage model needs a nonempty pair set")
    lp = LinearProgram()
    for name, lo, hi in marginal_variables(problem):
        lp.add_variable(name, lo, hi)
    gammas = {}
    for a, b in d_pairs:
        g = f"g_{problem.index_of(a)}_{problem.index_of(b)}"
        gammas[(a, b)] = g
        lp.add_variable(g, 0.0, 1.0)

    lp.constraints = _copy_rows(problem, statements, strict_pairs, "", eps_fixed)
    for (a, b), g in gammas.items():
        coeffs = u_diff_coeffs(problem, a, b)
        coeffs[g] = big_m
        lp.add_constraint(coeffs, ">=", eps_fixed)

    lp.set_objective({g: 1.0 for g in gammas.values()}, "min")
    result = solve_milp(MixedIntegerProgram(base=lp, binaries=list(gammas.values())))
    if result.status != "optimal":
        raise PipelineError(f"coverage model unexpectedly {result.status}")

    covered = tuple(pair for pair, g in gammas.items() if result.value(g) < 0.5)
    if not covered:
        raise PipelineError(
            "coverage model could not rank any remaining pair at the fixed margin"
        )
    return _extract_function(problem, result.assignment, label), covered


def procedure1(
    problem: Problem,
    statements,
    eps_fixed: float = DEFAULT_EPS,
    big_m: float = DEFAULT_BIG_M,
    relations: RelationBundle | None = None,
) -> SufficientSet:
    """Iterate the coverage MILP on the shrinking pair set until all of D is covered."""
    if relations is None:
        relations = compute_relations(problem, statements)
    strict_pairs = relations.strict_pairs()

    if not relations.d_pairs:
        # complete necessary relation: one compatible function represents
        # everything, chosen as the max-margin solution over base + strict rows
        system = base_system(problem, statements)
        check_compatibility(system)
        extra = []
        for a, b in strict_pairs:
            coeffs = u_diff_coeffs(problem, a, b)
            coeffs["eps"] = coeffs.get("eps", 0.0) - 1.0
            extra.append(Constraint(coeffs, ">=", 0.0))
        result = solve_lp(system.to_lp({"eps": 1.0}, "max", extra))
        if result.status != "optimal" or result.objective < eps_fixed:
            raise PipelineError("no single function can reproduce the strict relation")
        func = _extract_function(problem, result.assignment, "U1")
        return SufficientSet(functions=(func,), covered={"U1": ()}, iteration_log=())

    remaining = list(relations.d_pairs)
    functions: list[ValueFunction] = []
    covered_map: dict[str, tuple[tuple[str, str], ...]] = {}
    log: list[int] = []
    while remaining:
        label = f"U{len(functions) + 1}"
        func, covered = solve_pd(
            problem, statements, strict_pairs, tuple(remaining), eps_fixed, big_m, label
        )
        functions.append(func)
        covered_map[label] = covered
        covered_set = set(covered)
        remaining = [p for p in remaining if p not in covered_set]
        log.append(len(remaining))
        if len(log) > len(relations.d_pairs):
            raise PipelineError("coverage loop failed to terminate")
    return SufficientSet(
        functions=tuple(functions), covered=covered_map, iteration_log=tuple(log)
    )


def solve_p1(
    problem: Problem,
    statements,
    r: int,
    eps_fixed: float = DEFAULT_EPS,
    big_m: float = DEFAULT_BIG_M,
    relations: RelationBundle | None = None,
) -> MinimalityResult:
    """Minimality MILP: how many of r simultaneous function copies are removable
    while the rest still jointly cover every incomparable pair."""
    if r < 1:
        raise PipelineError("need at least one function copy")
    if relations is None:
        relations = compute_relations(problem, statements)
    strict_pairs = relations.strict_pairs()
    d_pairs = relations.d_pairs

    lp = LinearProgram()
    binaries = []
    for s in range(r):
        prefix = f"s{s}_"
        for name, lo, hi in marginal_variables(problem, prefix):
            lp.add_variable(name, lo, hi)
    rhos = [f"rho_{s}" for s in range(r)]
    for rho in rhos:
        lp.add_variable(rho, 0.0, 1.0)
        binaries.append(rho)
    gammas: dict[tuple[int, tuple[str, str]], str] = {}
    for s in range(r):
        for a, b in d_pairs:
            g = f"g{s}_{problem.index_of(a)}_{problem.index_of(b)}"
            gammas[(s, (a, b))] = g
            lp.add_variable(g, 0.0, 1.0)
            binaries.append(g)

    rows: list[Constraint] = []
    for s in range(r):
        prefix = f"s{s}_"
        rows += _copy_rows(problem, statements, strict_pairs, prefix, eps_fixed)
        for a, b in d_pairs:
            coeffs = u_diff_coeffs(problem, a, b, prefix)
            coeffs[gammas[(s, (a, b))]] = big_m
            coeffs[rhos[s]] = big_m
            rows.append(Constraint(coeffs, ">=", eps_fixed))
        for a, b in d_pairs:
            rows.append(
                Constraint({gammas[(s, (a, b))]: 1.0, rhos[s]: 1.0}, "<=", 1.0)
            )
    for a, b in d_pairs:
        coeffs = {gammas[(s, (a, b))]: 1.0 for s in range(r)}
        for rho in rhos:
            coeffs[rho] = 1.0
        rows.append(Constraint(coeffs, "<=", r - 1))
    if not d_pairs:
        # degenerate instance: without coverage rows nothing caps the removals,
        # but at least one function is always needed
        rows.append(Constraint({rho: 1.0 for rho in rhos}, "<=", r - 1))
    lp.constraints = rows
    lp.set_objective({rho: 1.0 for rho in rhos}, "max")

    result = solve_milp(MixedIntegerProgram(base=lp, binaries=binaries))
    if result.status != "optimal":
        raise PipelineError(f"minimality model unexpectedly {result.status}")
    z_star = round(result.objective)
    kept = [s for s in range(r) if result.value(rhos[s]) < 0.5]
    witnesses = tuple(
        _extract_function(problem, result.assignment, f"W{k + 1}", f"s{s}_")
        for k, s in enumerate(kept)
    )
    return MinimalityResult(r=r, z_star=z_star, t=r - z_star, witnesses=witnesses)


def solve_p2(
    problem: Problem,
    statements,
    t: int,
    big_m: float = DEFAULT_BIG_M,
    relations: RelationBundle | None = None,
    eps_fixed: float | None = None,
) -> DiscriminantSet:
    """Discrimination MILP: t function copies, shared margin maximized, every
    incomparable pair covered by at least one copy.

    ``eps_fixed`` pins the margin instead of maximizing it (feasibility probe).
    """
    if t < 1:
        raise PipelineError("need at least one function copy")
    if relations is None:
        relations = compute_relations(problem, statements)
    strict_pairs = relations.strict_pairs()
    d_pairs = relations.d_pairs

    lp = LinearProgram()
    for s in range(t):
        for name, lo, hi in marginal_variables(problem, f"s{s}_"):
            lp.add_variable(name, lo, hi)
    if eps_fixed is None:
        lp.add_variable("eps", 0.0, 2.0)
    binaries = []
    gammas: dict[tuple[int, tuple[str, str]], str] = {}
    for s in range(t):
        for a, b in d_pairs:
            g = f"g{s}_{problem.index_of(a)}_{problem.index_of(b)}"
            gammas[(s, (a, b))] = g
            lp.add_variable(g, 0.0, 1.0)
            binaries.append(g)

    rows: list[Constraint] = []
    for s in range(t):
        prefix = f"s{s}_"
        rows += _copy_rows(problem, statements, strict_pairs, prefix, eps_fixed)
        for a, b in d_pairs:
            coeffs = u_diff_coeffs(problem, a, b, prefix)
            coeffs[gammas[(s, (a, b))]] = big_m
            if eps_fixed is None:
                coeffs["eps"] = coeffs.get("eps", 0.0) - 1.0
                rows.append(Constraint(coeffs, ">=", 0.0))
            else:
                rows.append(Constraint(coeffs, ">=", eps_fixed))
    for a, b in d_pairs:
        rows.append(
            Constraint({gammas[(s, (a, b))]: 1.0 for s in range(t)}, "<=", t - 1)
        )
    lp.constraints = rows
    lp.set_objective({"eps": 1.0} if eps_fixed is None else {}, "max")

    result = solve_milp(MixedIntegerProgram(base=lp, binaries=binaries))
    if result.status != "optimal":
        raise PipelineError(f"discrimination model unexpectedly {result.status}")

    functions = tuple(
        _extract_function(problem, result.assignment, f"U{s + 1}", f"s{s}_")
        for s in range(t)
    )
    epsilon_star = result.objective if eps_fixed is None else eps_fixed
    coverage: dict[tuple[str, str], tuple[str, ...]] = {}
    for pair in tuple(strict_pairs) + tuple(d_pairs):
        labels = tuple(
            f.label
            for f in functions
            if _pair_margin(problem, f, pair[0], pair[1]) >= epsilon_star - NECESSARY_TOL
        )
        coverage[pair] = labels
    return DiscriminantSet(functions=functions, epsilon_star=epsilon_star, coverage=coverage)


def explain_pair(ds: DiscriminantSet, problem: Problem, a: str, b: str) -> Explanation:
    """Pick the representative function ranking a furthest above b and report the
    marginal values where the two alternatives differ."""
    ia, ib = problem.index_of(a), problem.index_of(b)
    best = None
    for func in ds.functions:
        margin = _pair_margin(problem, func, a, b)
        if best is None or margin > best[0] + 1e-12:
            best = (margin, func)
    if best is None or best[0] <= NECESSARY_TOL:
        raise NoCoveringFunction(
            f"no representative function ranks {a!r} above {b!r}"
        )
    margin, func = best
    a_marg, b_marg, differing = {}, {}, []
    for j, crit in enumerate(problem.criteria):
        va = func.marginal(crit, problem.performance[ia][j])
        vb = func.marginal(crit, problem.performance[ib][j])
        a_marg[crit.id] = va
        b_marg[crit.id] = vb
        if abs(va - vb) > NECESSARY_TOL:
            differing.append((crit.id, va - vb))
    return Explanation(
        pair=(a, b),
        label=func.label,
        margin=margin,
        a_marginals=a_marg,
        b_marginals=b_marg,
        differing=tuple(differing),
    )


def run_pipeline(
    problem: Problem,
    statements: list[PreferenceStatement],
    eps_fixed: float = DEFAULT_EPS,
    big_m: float = DEFAULT_BIG_M,
    jobs: int = 1,
) -> tuple[RelationBundle, SufficientSet, MinimalityResult, DiscriminantSet]:
    """Relations, sufficient set, minimal count and discriminant set in one pass."""
    relations = compute_relations(problem, statements, jobs=jobs)
    sufficient = procedure1(problem, statements, eps_fixed, big_m, relations)
    minimality = solve_p1(problem, statements, sufficient.r, eps_fixed, big_m, relations)
    discriminant = solve_p2(problem, statements, minimality.t, big_m, relations)
    return relations, sufficient, minimality, discriminant
