"""Bounded-variable two-phase primal simplex on dense numpy arrays.

Solves min c.x subject to A x = b, l <= x <= u (bounds may be infinite).
Pivot selection is Dantzig's rule with deterministic index tie-breaks,
falling back to Bland's rule when the objective stalls, so runs are
reproducible and cycling-free. Intended for desk-scale models (hundreds of
rows); no sparsity, no warm starts.
"""

from __future__ import annotations

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_AT_LOWER = 0
_AT_UPPER = 1
_FREE = 2
_BASIC = 3

_RCOST_TOL = 1e-9
_PIVOT_TOL = 1e-10
_STALL_LIMIT = 100
_REFACTOR_EVERY = 64


class SimplexError(RuntimeError):
    """Numerical breakdown (singular basis, iteration limit)."""


def solve_bounded(c, A, b, lower, upper):
    """Two-phase bounded simplex.

    Returns (status, x, objective); x and objective are None unless optimal.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    m, n = A.shape

    if m == 0:
        x = _nonbasic_start(lower, upper)
        # unconstrained: push each variable to its favourable finite bound
        for j in range(n):
            if c[j] > 0 and np.isfinite(lower[j]):
                x[j] = lower[j]
            elif c[j] > 0:
                return UNBOUNDED, None, None
            elif c[j] < 0 and np.isfinite(upper[j]):
                x[j] = upper[j]
            elif c[j] < 0:
                return UNBOUNDED, None, None
        return OPTIMAL, x, float(c @ x)

    # Attach one artificial per row carrying the initial residual.
    x0 = _nonbasic_start(lower, upper)
    resid = b - A @ x0
    art_sign = np.where(resid >= 0.0, 1.0, -1.0)
    A_ext = np.hstack([A, np.diag(art_sign)])
    lower_ext = np.concatenate([lower, np.zeros(m)])
    upper_ext = np.concatenate([upper, np.full(m, np.inf)])

    state = _State(A_ext, b, lower_ext, upper_ext, n_struct=n)
    state.basis = np.arange(n, n + m)
    state.status = np.empty(n + m, dtype=np.int8)
    for j in range(n):
        if np.isfinite(lower[j]):
            state.status[j] = _AT_LOWER
        elif np.isfinite(upper[j]):
            state.status[j] = _AT_UPPER
        else:
            state.status[j] = _FREE
    state.status[n:] = _BASIC
    state.refactorize()

    # Phase 1: minimize total artificial mass.
    phase1_cost = np.concatenate([np.zeros(n), np.ones(m)])
    status = state.run(phase1_cost, allow_unbounded=False)
    if status != OPTIMAL:
        raise SimplexError("phase 1 did not converge")
    feas_tol = 1e-9 * max(1.0, float(np.max(np.abs(b))) if m else 1.0)
    if state.objective(phase1_cost) > feas_tol:
        return INFEASIBLE, None, None

    # Phase 2: freeze artificials at zero and optimize the real objective.
    state.lower[n:] = 0.0
    state.upper[n:] = 0.0
    full_cost = np.concatenate([c, np.zeros(m)])
    status = state.run(full_cost, allow_unbounded=True)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None

    x = state.solution()
    return OPTIMAL, x[:n], float(c @ x[:n])


def _nonbasic_start(lower, upper):
    x = np.zeros(len(lower))
    for j in range(len(lower)):
        if np.isfinite(lower[j]):
            x[j] = lower[j]
        elif np.isfinite(upper[j]):
            x[j] = upper[j]
    return x


class _State:
    def __init__(self, A, b, lower, upper, n_struct):
        self.A = A
        self.b = b
        self.lower = lower
        self.upper = upper
        self.n_struct = n_struct
        self.m, self.n = A.shape
        self.basis = None
        self.status = None
        self.B_inv = None
        self._pivots_since_refactor = 0

    def refactorize(self):
        B = self.A[:, self.basis]
        try:
            self.B_inv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SimplexError("singular basis") from exc
        self._pivots_since_refactor = 0

    def nonbasic_values(self):
        x = np.zeros(self.n)
        at_lower = self.status == _AT_LOWER
        at_upper = self.status == _AT_UPPER
        x[at_lower] = self.lower[at_lower]
        x[at_upper] = self.upper[at_upper]
        return x

    def basic_values(self, x_nb):
        return self.B_inv @ (self.b - self.A @ x_nb)

    def solution(self):
        x = self.nonbasic_values()
        # final residual polish with a fresh factorization
        B = self.A[:, self.basis]
        x[self.basis] = np.linalg.solve(B, self.b - self.A @ x)
        return x

    def objective(self, cost):
        return float(cost @ self.solution())

    def run(self, cost, allow_unbounded):
        bland = False
        stall = 0
        last_obj = np.inf
        max_iter = 200 * (self.m + self.n) + 20000
        for _ in range(max_iter):
            x_nb = self.nonbasic_values()
            x_b = self.basic_values(x_nb)
            y = cost[self.basis] @ self.B_inv
            d = cost - y @ self.A

            entering, direction = self._choose_entering(d, bland)
            if entering is None:
                return OPTIMAL

            w = self.B_inv @ self.A[:, entering]
            step, leave_pos, leave_to = self._ratio_test(entering, direction, w, x_b, bland)
            if step is None:
                if allow_unbounded:
                    return UNBOUNDED
                raise SimplexError("unbounded phase-1 subproblem")

            if leave_pos is None:
                # bound flip: entering variable runs to its opposite bound
                self.status[entering] = _AT_UPPER if direction > 0 else _AT_LOWER
            else:
                leaving = self.basis[leave_pos]
                self.basis[leave_pos] = entering
                self.status[entering] = _BASIC
                self.status[leaving] = leave_to
                self._update_inverse(w, leave_pos)

            obj = float(cost[self.basis] @ self.basic_values(self.nonbasic_values())
                        + cost @ self.nonbasic_values())
            if obj < last_obj - 1e-12:
                last_obj = obj
                stall = 0
                bland = False
            else:
                stall += 1
                if stall > _STALL_LIMIT:
                    bland = True
        raise SimplexError("iteration limit exceeded")

    def _choose_entering(self, d, bland):
        best = None
        best_score = _RCOST_TOL
        for j in range(self.n):
            st = self.status[j]
            if st == _BASIC:
                continue
            if self.upper[j] - self.lower[j] <= _PIVOT_TOL:
                continue  # fixed variable can never move
            if st == _AT_LOWER and d[j] < -_RCOST_TOL:
                score, direction = -d[j], 1
            elif st == _AT_UPPER and d[j] > _RCOST_TOL:
                score, direction = d[j], -1
            elif st == _FREE and abs(d[j]) > _RCOST_TOL:
                score, direction = abs(d[j]), (1 if d[j] < 0 else -1)
            else:
                continue
            if bland:
                return j, direction
            if score > best_score:
                best_score = score
                best = (j, direction)
        return best if best is not None else (None, None)

    def _ratio_test(self, entering, direction, w, x_b, bland):
        """Largest step before a basic variable or the entering bound blocks.

        Returns (step, leaving_row or None for a bound flip, status the
        leaver takes); (None, None, None) signals an unbounded ray.
        """
        best_t = np.inf
        best = None  # (row, leave_to, |pivot|)
        for k in range(self.m):
            delta = direction * w[k]
            var = self.basis[k]
            if delta > _PIVOT_TOL:
                bound = self.lower[var]
                if not np.isfinite(bound):
                    continue
                t = (x_b[k] - bound) / delta
                leave_to = _AT_LOWER
            elif delta < -_PIVOT_TOL:
                bound = self.upper[var]
                if not np.isfinite(bound):
                    continue
                t = (bound - x_b[k]) / (-delta)
                leave_to = _AT_UPPER
            else:
                continue
            t = max(t, 0.0)
            if t < best_t - 1e-10:
                best_t, best = t, (k, leave_to, abs(w[k]))
            elif t < best_t + 1e-10 and best is not None:
                # deterministic tie-break: stable pivots first, then low index
                if bland:
                    if self.basis[k] < self.basis[best[0]]:
                        best_t, best = min(best_t, t), (k, leave_to, abs(w[k]))
                elif (abs(w[k]), -self.basis[k]) > (best[2], -self.basis[best[0]]):
                    best_t, best = min(best_t, t), (k, leave_to, abs(w[k]))

        span = self.upper[entering] - self.lower[entering]
        if np.isfinite(span) and span < best_t - 1e-10:
            return span, None, None
        if best is None:
            if np.isfinite(span):
                return span, None, None
            return None, None, None
        return best_t, best[0], best[1]

    def _update_inverse(self, w, row):
        pivot = w[row]
        if abs(pivot) < 1e-11:
            raise SimplexError("pivot element too small")
        self.B_inv[row] /= pivot
        mask = np.arange(self.m) != row
        self.B_inv[mask] -= np.outer(w[mask], self.B_inv[row])
        self._pivots_since_refactor += 1
        if self._pivots_since_refactor >= _REFACTOR_EVERY:
            self.refactorize()
