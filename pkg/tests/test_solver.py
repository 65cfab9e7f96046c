"""Solver tests: trivial cases plus exhaustive-enumeration oracles.

The LP oracle enumerates every basic point (square subsystems of active
constraints); the MILP oracle enumerates all binary assignments and solves
the remaining LPs with scipy's linprog, independent of the production path.
"""

import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from rorep.solver import (
    Constraint,
    LinearProgram,
    MixedIntegerProgram,
    ModelError,
    lp_text,
    solve_lp,
    solve_milp,
)


def _lp(objective, sense, variables, rows):
    lp = LinearProgram()
    for name, lo, hi in variables:
        lp.add_variable(name, lo, hi)
    for coeffs, rel, rhs in rows:
        lp.add_constraint(coeffs, rel, rhs)
    lp.set_objective(objective, sense)
    return lp


def test_simple_max():
    lp = _lp({"x1": 1, "x2": 1}, "max",
             [("x1", 0, np.inf), ("x2", 0, np.inf)],
             [({"x1": 1}, "<=", 1), ({"x2": 1}, "<=", 2)])
    res = solve_lp(lp)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(3.0, abs=1e-8)


def test_infeasible():
    lp = _lp({"x": 1}, "max", [("x", 0, np.inf)],
             [({"x": 1}, ">=", 1), ({"x": 1}, "<=", 0)])
    assert solve_lp(lp).status == "infeasible"


def test_unbounded():
    lp = _lp({"x": 1}, "max", [("x", 0, np.inf)], [({"x": -1}, "<=", 5)])
    assert solve_lp(lp).status == "unbounded"


def test_equality_and_free_variable():
    lp = _lp({"x": 1, "y": 2}, "min",
             [("x", -np.inf, np.inf), ("y", -1, 4)],
             [({"x": 1, "y": 1}, "=", 2)])
    res = solve_lp(lp)
    assert res.status == "optimal"
    # push y to its lower bound, x = 3
    assert res.objective == pytest.approx(1.0, abs=1e-8)
    assert res.value("y") == pytest.approx(-1.0, abs=1e-9)


def test_undeclared_variable_is_model_error_not_infeasible():
    lp = _lp({"x": 1}, "max", [("x", 0, 1)], [({"ghost": 1}, "<=", 1)])
    with pytest.raises(ModelError):
        solve_lp(lp)


def test_vacuous_zero_row():
    lp = _lp({"x": 1}, "max", [("x", 0, 1)], [({}, "=", 0)])
    res = solve_lp(lp)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(1.0)


# --- LP oracle: vertex enumeration ------------------------------------------


def _enumerate_vertices(c, rows, lower, upper, sense):
    """Best feasible basic point over all square active-constraint subsystems."""
    n = len(c)
    planes = [(np.asarray(a, float), float(rhs)) for a, _, rhs in rows]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        planes.append((e.copy(), lower[j]))
        planes.append((e.copy(), upper[j]))

    def feasible(x):
        if np.any(x < lower - 1e-9) or np.any(x > upper + 1e-9):
            return False
        for a, rel, rhs in rows:
            v = float(np.dot(a, x))
            if rel == "<=" and v > rhs + 1e-9:
                return False
            if rel == ">=" and v < rhs - 1e-9:
                return False
            if rel == "=" and abs(v - rhs) > 1e-9:
                return False
        return True

    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        A = np.array([planes[k][0] for k in combo])
        b = np.array([planes[k][1] for k in combo])
        if abs(np.linalg.det(A)) < 1e-10:
            continue
        x = np.linalg.solve(A, b)
        if not feasible(x):
            continue
        val = float(np.dot(c, x))
        if best is None or (val > best if sense == "max" else val < best):
            best = val
    return best


def _random_lp(rng):
    n = int(rng.integers(1, 5))
    m = int(rng.integers(0, 7))
    lower = rng.integers(-3, 1, size=n).astype(float)
    upper = lower + rng.integers(1, 6, size=n).astype(float)
    rows = []
    for _ in range(m):
        a = rng.integers(-5, 6, size=n).astype(float)
        if not a.any():
            a[int(rng.integers(0, n))] = 1.0
        rel = ("<=", ">=", "=")[int(rng.integers(0, 3))]
        rhs = float(rng.integers(-8, 9))
        rows.append((a, rel, rhs))
    c = rng.integers(-5, 6, size=n).astype(float)
    sense = "max" if rng.random() < 0.5 else "min"
    return c, rows, lower, upper, sense


def _to_lp(c, rows, lower, upper, sense):
    lp = LinearProgram()
    for j in range(len(c)):
        lp.add_variable(f"x{j}", float(lower[j]), float(upper[j]))
    for a, rel, rhs in rows:
        lp.add_constraint({f"x{j}": float(a[j]) for j in range(len(c)) if a[j]}, rel, rhs)
    lp.set_objective({f"x{j}": float(c[j]) for j in range(len(c)) if c[j]}, sense)
    return lp


def test_lp_oracle_200_random():
    rng = np.random.default_rng(20260809)
    for case in range(200):
        c, rows, lower, upper, sense = _random_lp(rng)
        expected = _enumerate_vertices(c, rows, lower, upper, sense)
        res = solve_lp(_to_lp(c, rows, lower, upper, sense))
        if expected is None:
            assert res.status == "infeasible", f"case {case}: oracle infeasible, got {res.status}"
        else:
            assert res.status == "optimal", f"case {case}: oracle feasible, got {res.status}"
            assert res.objective == pytest.approx(expected, abs=1e-6), f"case {case}"


# --- MILP oracle: exhaustive binary enumeration ------------------------------


def test_milp_indicator_example():
    # two indicator-relaxed rows; exactly one binary must switch on
    lp = _lp({"g1": 1, "g2": 1}, "min",
             [("x", -10, 10), ("g1", 0, 1), ("g2", 0, 1)],
             [({"x": 1, "g1": 10}, ">=", 1), ({"x": 1, "g2": -10}, "<=", -1)])
    res = solve_milp(MixedIntegerProgram(base=lp, binaries=["g1", "g2"]))
    assert res.status == "optimal"
    assert res.objective == pytest.approx(1.0, abs=1e-8)


def test_milp_without_binaries_equals_lp():
    lp = _lp({"x1": 2, "x2": 1}, "max",
             [("x1", 0, 4), ("x2", 0, 4)],
             [({"x1": 1, "x2": 1}, "<=", 5)])
    a = solve_lp(lp)
    b = solve_milp(MixedIntegerProgram(base=lp, binaries=[]))
    assert a == b


def test_milp_binary_bounds_enforced():
    lp = _lp({"g": 1}, "max", [("g", 0, 2)], [])
    with pytest.raises(ModelError):
        solve_milp(MixedIntegerProgram(base=lp, binaries=["g"]))


def _milp_oracle(c, rows, lower, upper, sense, bin_idx):
    """Enumerate binary assignments; solve each continuous rest with scipy."""
    n = len(c)
    best = None
    sign = 1.0 if sense == "min" else -1.0
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for a, rel, rhs in rows:
        if rel == "<=":
            A_ub.append(a)
            b_ub.append(rhs)
        elif rel == ">=":
            A_ub.append(-a)
            b_ub.append(-rhs)
        else:
            A_eq.append(a)
            b_eq.append(rhs)
    for bits in itertools.product((0.0, 1.0), repeat=len(bin_idx)):
        bounds = []
        for j in range(n):
            if j in bin_idx:
                v = bits[bin_idx.index(j)]
                bounds.append((v, v))
            else:
                bounds.append((lower[j], upper[j]))
        res = linprog(
            sign * c,
            A_ub=np.array(A_ub) if A_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
            A_eq=np.array(A_eq) if A_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=bounds,
            method="highs",
        )
        if res.status == 0:
            val = sign * res.fun
            if best is None or (val > best if sense == "max" else val < best):
                best = val
    return best


def _random_milp(rng):
    n_cont = int(rng.integers(1, 5))
    n_bin = int(rng.integers(1, 7))
    n = n_cont + n_bin
    lower = np.concatenate([rng.integers(-3, 1, size=n_cont).astype(float), np.zeros(n_bin)])
    upper = np.concatenate([lower[:n_cont] + rng.integers(1, 6, size=n_cont), np.ones(n_bin)])
    rows = []
    for _ in range(int(rng.integers(1, 7))):
        a = rng.integers(-4, 5, size=n).astype(float)
        if not a.any():
            a[0] = 1.0
        rel = ("<=", ">=", "=")[int(rng.integers(0, 3))]
        rhs = float(rng.integers(-6, 7))
        rows.append((a, rel, rhs))
    c = rng.integers(-5, 6, size=n).astype(float)
    sense = "max" if rng.random() < 0.5 else "min"
    bin_idx = list(range(n_cont, n))
    return c, rows, lower, upper, sense, bin_idx


def test_milp_oracle_200_random():
    rng = np.random.default_rng(777)
    for case in range(200):
        c, rows, lower, upper, sense, bin_idx = _random_milp(rng)
        lp = _to_lp(c, rows, lower, upper, sense)
        mip = MixedIntegerProgram(base=lp, binaries=[f"x{j}" for j in bin_idx])
        expected = _milp_oracle(c, rows, lower, upper, sense, bin_idx)
        res = solve_milp(mip)
        if expected is None:
            assert res.status == "infeasible", f"case {case}"
            continue
        assert res.status == "optimal", f"case {case}"
        assert res.objective == pytest.approx(expected, abs=1e-6), f"case {case}"
        # binaries integral, LP relaxation bounds the integer optimum
        for name in mip.binaries:
            v = res.value(name)
            assert abs(v - round(v)) <= 1e-6
        relax = solve_lp(lp)
        if relax.status == "optimal":
            if sense == "max":
                assert relax.objective >= res.objective - 1e-6
            else:
                assert relax.objective <= res.objective + 1e-6


def test_milp_determinism():
    rng = np.random.default_rng(128)
    c, rows, lower, upper, sense, bin_idx = _random_milp(rng)
    lp = _to_lp(c, rows, lower, upper, sense)
    mip = MixedIntegerProgram(base=lp, binaries=[f"x{j}" for j in bin_idx])
    first = solve_milp(mip)
    second = solve_milp(mip)
    assert first == second


def test_lp_determinism():
    rng = np.random.default_rng(4242)
    c, rows, lower, upper, sense = _random_lp(rng)
    lp = _to_lp(c, rows, lower, upper, sense)
    assert solve_lp(lp) == solve_lp(lp)


def test_lp_text_dump():
    lp = _lp({"x": 1}, "max", [("x", 0, 1), ("g", 0, 1)], [({"x": 1, "g": 2}, "<=", 1)])
    text = lp_text(MixedIntegerProgram(base=lp, binaries=["g"]))
    assert "max 1 x" in text
    assert "r0: 1 x + 2 g <= 1" in text
    assert "binaries" in text
