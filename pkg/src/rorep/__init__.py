"""Robust ordinal regression with representative additive value functions."""

__version__ = "0.1.0"

from .engine import (
    IncompatiblePreferences,
    RelationBundle,
    base_system,
    check_compatibility,
    compute_relations,
    is_necessarily_preferred,
    is_possibly_preferred,
)
from .model import (
    Criterion,
    DomainError,
    PreferenceStatement,
    Problem,
    ValueFunction,
    build_problem,
    dominates,
    evaluate,
)
from .representatives import (
    DiscriminantSet,
    Explanation,
    MinimalityResult,
    NoCoveringFunction,
    PipelineError,
    SufficientSet,
    explain_pair,
    procedure1,
    run_pipeline,
    solve_p1,
    solve_p2,
    solve_pd,
)
from .solver import (
    LinearProgram,
    MixedIntegerProgram,
    ModelError,
    SolveResult,
    lp_text,
    solve_lp,
    solve_milp,
)

__all__ = [
    "__version__",
    "Criterion",
    "DiscriminantSet",
    "DomainError",
    "Explanation",
    "IncompatiblePreferences",
    "LinearProgram",
    "MinimalityResult",
    "MixedIntegerProgram",
    "ModelError",
    "NoCoveringFunction",
    "PipelineError",
    "PreferenceStatement",
    "Problem",
    "RelationBundle",
    "SolveResult",
    "SufficientSet",
    "ValueFunction",
    "base_system",
    "build_problem",
    "check_compatibility",
    "compute_relations",
    "dominates",
    "evaluate",
    "explain_pair",
    "is_necessarily_preferred",
    "is_possibly_preferred",
    "lp_text",
    "procedure1",
    "run_pipeline",
    "solve_lp",
    "solve_milp",
    "solve_p1",
    "solve_p2",
    "solve_pd",
]
