"""Core data types: performance tables, criteria, preference statements, value functions.

All scores are kept gain-oriented internally; cost criteria are negated at
ingestion and the original direction is recorded for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class DomainError(ValueError):
    """Malformed problem data (duplicate ids, bad scores, unknown alternatives)."""


@dataclass(frozen=True)
class Criterion:
    """A single gain-oriented criterion with its characteristic points.

    ``points`` are the distinct values at which marginal values are defined,
    sorted ascending. ``alpha`` (worst considered value) and ``beta`` (best)
    default to the extreme points. ``cost`` records that raw scores were
    negated at ingestion.
    """

    id: str
    points: tuple[float, ...]
    alpha: float
    beta: float
    cost: bool = False

    def __post_init__(self):
        if not self.points:
            raise DomainError(f"criterion {self.id!r} has no characteristic points")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise DomainError(f"criterion {self.id!r}: points must be strictly ascending")
        # alpha/beta are themselves characteristic points (build_problem inserts them)
        if self.alpha != self.points[0] or self.beta != self.points[-1]:
            raise DomainError(
                f"criterion {self.id!r}: alpha/beta must be the extreme characteristic points"
            )

    def point_index(self, value: float) -> int:
        for k, p in enumerate(self.points):
            if math.isclose(p, value, rel_tol=0.0, abs_tol=1e-12):
                return k
        raise DomainError(f"score {value} is not a characteristic point of {self.id!r}")


@dataclass(frozen=True)
class Problem:
    """Alternatives x criteria performance matrix (gain-oriented)."""

    alternatives: tuple[str, ...]
    criteria: tuple[Criterion, ...]
    performance: tuple[tuple[float, ...], ...]  # row per alternative

    def __post_init__(self):
        if len(set(self.alternatives)) != len(self.alternatives):
            raise DomainError("duplicate alternative identifier")
        if len(self.performance) != len(self.alternatives):
            raise DomainError("performance rows do not match alternatives")
        for row in self.performance:
            if len(row) != len(self.criteria):
                raise DomainError("performance columns do not match criteria")
            for v in row:
                if not math.isfinite(v):
                    raise DomainError("non-finite score in performance table")

    def index_of(self, alternative: str) -> int:
        try:
            return self.alternatives.index(alternative)
        except ValueError:
            raise DomainError(f"unknown alternative {alternative!r}") from None

    def score(self, alternative: str, criterion_index: int) -> float:
        return self.performance[self.index_of(alternative)][criterion_index]


@dataclass(frozen=True)
class PreferenceStatement:
    """A pairwise statement from the Decision Maker: a > b (strict) or a = b."""

    kind: str  # "strict" | "indifference"
    a: str
    b: str

    def __post_init__(self):
        if self.kind not in ("strict", "indifference"):
            raise DomainError(f"unknown statement kind {self.kind!r}")
        if self.kind == "strict" and self.a == self.b:
            raise DomainError("strict preference requires two distinct alternatives")

    def __str__(self):
        op = ">" if self.kind == "strict" else "="
        return f"{self.a} {op} {self.b}"


@dataclass(frozen=True)
class ValueFunction:
    """Additive value function: per-criterion marginal values at characteristic points.

    ``values[criterion.id]`` is parallel to ``criterion.points``.
    """

    label: str
    values: dict[str, tuple[float, ...]] = field(compare=True)

    def marginal(self, criterion: Criterion, score: float) -> float:
        return self.values[criterion.id][criterion.point_index(score)]

    def validate(self, problem: Problem, tol: float = 1e-7) -> None:
        """Check monotonicity, zero-at-alpha and unit normalization."""
        beta_sum = 0.0
        for crit in problem.criteria:
            vals = self.values[crit.id]
            if len(vals) != len(crit.points):
                raise DomainError(f"{self.label}: value count mismatch on {crit.id!r}")
            for lo, hi in zip(vals, vals[1:]):
                if hi < lo - tol:
                    raise DomainError(f"{self.label}: non-monotone marginals on {crit.id!r}")
            if abs(vals[0]) > tol:
                raise DomainError(f"{self.label}: marginal at alpha of {crit.id!r} is not 0")
            beta_sum += vals[-1]
        if abs(beta_sum - 1.0) > tol:
            raise DomainError(f"{self.label}: marginals at beta sum to {beta_sum}, not 1")


def build_problem(
    alternatives: list[str],
    criterion_ids: list[str],
    raw_table: list[list[float]],
    directions: list[str] | None = None,
    alpha_overrides: dict[str, float] | None = None,
    beta_overrides: dict[str, float] | None = None,
) -> Problem:
    """Build a gain-oriented :class:`Problem` from a raw score matrix.

    Cost columns are negated. Characteristic points are the sorted distinct
    observed values per criterion (plus any alpha/beta override values).
    """
    if not alternatives or not criterion_ids:
        raise DomainError("empty table")
    if len(set(alternatives)) != len(alternatives):
        raise DomainError("duplicate alternative identifier")
    if len(raw_table) != len(alternatives):
        raise DomainError("row count does not match alternatives")
    if directions is None:
        directions = ["gain"] * len(criterion_ids)
    if len(directions) != len(criterion_ids):
        raise DomainError("direction count does not match criteria")
    for d in directions:
        if d not in ("gain", "cost"):
            raise DomainError(f"direction must be gain or cost, got {d!r}")

    n, m = len(alternatives), len(criterion_ids)
    matrix = []
    for row in raw_table:
        if len(row) != m:
            raise DomainError("ragged performance table")
        vals = [float(v) for v in row]
        for v in vals:
            if not math.isfinite(v):
                raise DomainError("non-finite score in performance table")
        matrix.append(vals)

    oriented = [
        [(-matrix[i][j] if directions[j] == "cost" else matrix[i][j]) for j in range(m)]
        for i in range(n)
    ]

    alpha_overrides = alpha_overrides or {}
    beta_overrides = beta_overrides or {}
    criteria = []
    for j, cid in enumerate(criterion_ids):
        points = sorted({oriented[i][j] for i in range(n)})
        alpha = alpha_overrides.get(cid, points[0])
        beta = beta_overrides.get(cid, points[-1])
        if alpha > points[0] or beta < points[-1]:
            raise DomainError(f"criterion {cid!r}: alpha/beta must bracket observed values")
        # alpha/beta become characteristic points so marginal variables exist there
        pointset = set(points) | {alpha, beta}
        criteria.append(
            Criterion(
                id=cid,
                points=tuple(sorted(pointset)),
                alpha=alpha,
                beta=beta,
                cost=(directions[j] == "cost"),
            )
        )

    return Problem(
        alternatives=tuple(alternatives),
        criteria=tuple(criteria),
        performance=tuple(tuple(row) for row in oriented),
    )


def evaluate(function: ValueFunction, problem: Problem, alternative: str) -> float:
    """U(a) = sum of marginal values at the alternative's scores."""
    i = problem.index_of(alternative)
    total = 0.0
    for j, crit in enumerate(problem.criteria):
        total += function.marginal(crit, problem.performance[i][j])
    return total


def dominates(problem: Problem, a: str, b: str) -> bool:
    """True iff a scores at least as high as b on every (gain-oriented) criterion."""
    ia, ib = problem.index_of(a), problem.index_of(b)
    return all(
        problem.performance[ia][j] >= problem.performance[ib][j]
        for j in range(len(problem.criteria))
    )
