import numpy as np
import pytest

from rorep.engine import IncompatiblePreferences, base_system, check_compatibility
from rorep.model import PreferenceStatement, ValueFunction, build_problem

DEMOCRACY_ALTS = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10"]
DEMOCRACY_CRITS = ["g1", "g2", "g3", "g4", "g5"]
DEMOCRACY_TABLE = [
    [6.92, 7.14, 5.00, 6.25, 6.76],
    [9.17, 7.86, 5.56, 8.75, 9.41],
    [5.75, 1.86, 2.78, 5.00, 5.00],
    [6.08, 5.71, 4.44, 7.50, 6.18],
    [9.17, 6.08, 3.89, 5.63, 8.24],
    [7.33, 6.43, 4.44, 6.25, 8.24],
    [9.17, 5.36, 5.00, 3.75, 9.12],
    [4.33, 7.50, 2.78, 7.50, 7.35],
    [9.58, 7.50, 6.67, 5.63, 9.71],
    [7.00, 5.57, 5.00, 6.25, 8.24],
]

# Necessary preference matrix of the worked example (off-diagonal rows).
DEMOCRACY_NECESSARY = {
    "a1": ["a3"],
    "a2": ["a1", "a3", "a4", "a5", "a6", "a7", "a8", "a10"],
    "a3": [],
    "a4": ["a3", "a5"],
    "a5": ["a3"],
    "a6": ["a3"],
    "a7": ["a3", "a6"],
    "a8": ["a3", "a10"],
    "a9": ["a3", "a5", "a6", "a7"],
    "a10": ["a3"],
}


def democracy_problem():
    return build_problem(DEMOCRACY_ALTS, DEMOCRACY_CRITS, DEMOCRACY_TABLE)


def democracy_statements():
    return [
        PreferenceStatement("strict", "a4", "a5"),
        PreferenceStatement("strict", "a8", "a10"),
        PreferenceStatement("strict", "a7", "a6"),
    ]


def democracy_necessary_pairs() -> set[tuple[str, str]]:
    pairs = {(a, a) for a in DEMOCRACY_ALTS}
    for a, row in DEMOCRACY_NECESSARY.items():
        for b in row:
            pairs.add((a, b))
    return pairs


@pytest.fixture(scope="session")
def democracy():
    return democracy_problem(), democracy_statements()


# Published witness functions of the worked example (used as fixed inputs for
# evaluation and explanation tests, never as reproduction targets).
PAPER_U8 = {
    "g1": (0, 0, 0, 0, 0.136363636, 0.136363636, 0.318181818, 0.318181818),
    "g2": (0, 0, 0.090909091, 0.090909091, 0.090909091, 0.090909091, 0.136363636,
           0.181818182, 0.181818182),
    "g3": (0, 0, 0, 0, 0, 0),
    "g4": (0, 0, 0, 0, 0.5, 0.5),
    "g5": (0, 0, 0, 0, 0, 0, 0, 0),
}
PAPER_U9 = {
    "g1": (0, 0, 0, 0, 0, 0, 0, 0),
    "g2": (0, 0, 0, 0, 0, 0, 0.090909091, 0.090909091, 0.090909091),
    "g3": (0, 0, 0, 0.295454545, 0.295454545, 0.295454545),
    "g4": (0, 0, 0, 0.204545455, 0.5, 0.5),
    "g5": (0, 0, 0, 0.113636364, 0.113636364, 0.113636364, 0.113636364, 0.113636364),
}
PAPER_U10 = {
    "g1": (0, 0, 0, 0, 0, 0.090909091, 0.090909091, 0.090909091),
    "g2": (0, 0, 0, 0.272727273, 0.272727273, 0.272727273, 0.272727273, 0.272727273,
           0.272727273),
    "g3": (0, 0, 0.181818182, 0.181818182, 0.181818182, 0.272727273),
    "g4": (0, 0, 0, 0, 0, 0),
    "g5": (0, 0, 0, 0, 0, 0.363636364, 0.363636364, 0.363636364),
}


def paper_functions():
    return (
        ValueFunction("U8", {k: tuple(map(float, v)) for k, v in PAPER_U8.items()}),
        ValueFunction("U9", {k: tuple(map(float, v)) for k, v in PAPER_U9.items()}),
        ValueFunction("U10", {k: tuple(map(float, v)) for k, v in PAPER_U10.items()}),
    )


def random_instance(rng: np.random.Generator, max_alts=6, max_crits=3, max_statements=2):
    """Small integer-grid instance with statements kept only while compatible."""
    while True:
        n = int(rng.integers(2, max_alts + 1))
        m = int(rng.integers(1, max_crits + 1))
        table = rng.integers(0, 5, size=(n, m)).astype(float)
        if any(len(set(table[:, j])) > 1 for j in range(m)):
            break
    alts = [f"b{i + 1}" for i in range(n)]
    crits = [f"c{j + 1}" for j in range(m)]
    problem = build_problem(alts, crits, table.tolist())

    statements = []
    for _ in range(int(rng.integers(0, max_statements + 1))):
        i, j = rng.choice(n, size=2, replace=False)
        kind = "strict" if rng.random() < 0.8 else "indifference"
        candidate = statements + [PreferenceStatement(kind, alts[int(i)], alts[int(j)])]
        try:
            check_compatibility(base_system(problem, candidate))
        except IncompatiblePreferences:
            continue
        statements = candidate
    return problem, statements
