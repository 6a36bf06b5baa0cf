"""Dense phase-1 simplex for small linear feasibility problems.

Answers "does x >= 0 exist with A_eq x = b_eq and A_ub x <= b_ub" by
minimizing the L1 equality residual (sum of artificial variables). The
residual at optimum is returned so callers can apply their own tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PIVOT_TOL = 1e-11
_COST_TOL = 1e-11


@dataclass(frozen=True)
class FeasibilityResult:
    residual: float  # minimal achievable L1 violation of the equality rows
    x: np.ndarray  # primal point achieving it
    iterations: int


def min_equality_residual(
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    a_ub: np.ndarray | None = None,
    b_ub: np.ndarray | None = None,
    max_iterations: int = 20000,
) -> FeasibilityResult:
    """Phase-1 simplex with Bland's rule (guaranteed finite termination).

    Every upper-bound row must have b_ub >= 0 so its slack can start basic.
    """
    a_eq = np.asarray(a_eq, dtype=np.float64)
    b_eq = np.asarray(b_eq, dtype=np.float64).reshape(-1)
    if a_eq.ndim != 2 or a_eq.shape[0] != b_eq.size:
        raise ValueError("equality system shape mismatch")
    m_eq, n = a_eq.shape
    if a_ub is None:
        a_ub = np.zeros((0, n))
        b_ub = np.zeros(0)
    a_ub = np.asarray(a_ub, dtype=np.float64)
    b_ub = np.asarray(b_ub, dtype=np.float64).reshape(-1)
    if a_ub.shape != (b_ub.size, n):
        raise ValueError("inequality system shape mismatch")
    if np.any(b_ub < 0.0):
        raise ValueError("b_ub rows must be nonnegative")
    m_ub = b_ub.size

    # orient equality rows so b >= 0, then columns are [x, slacks, artificials]
    flip = np.where(b_eq < 0.0, -1.0, 1.0)
    rows_eq = a_eq * flip[:, None]
    rhs_eq = b_eq * flip

    m = m_eq + m_ub
    n_cols = n + m_ub + m_eq
    tableau = np.zeros((m, n_cols + 1))
    tableau[:m_eq, :n] = rows_eq
    tableau[:m_eq, n + m_ub :][np.arange(m_eq), np.arange(m_eq)] = 1.0
    tableau[:m_eq, -1] = rhs_eq
    tableau[m_eq:, :n] = a_ub
    tableau[m_eq:, n : n + m_ub][np.arange(m_ub), np.arange(m_ub)] = 1.0
    tableau[m_eq:, -1] = b_ub

    cost = np.zeros(n_cols)
    cost[n + m_ub :] = 1.0
    # artificials start basic on equality rows, slacks on cap rows
    basis = list(range(n + m_ub, n_cols)) + list(range(n, n + m_ub))

    iterations = 0
    while iterations < max_iterations:
        reduced = cost - cost[basis] @ tableau[:, :n_cols]
        entering = -1
        for j in range(n_cols):
            if reduced[j] < -_COST_TOL:
                entering = j
                break
        if entering < 0:
            break
        col = tableau[:, entering]
        best_ratio = np.inf
        leaving_row = -1
        for i in range(m):
            if col[i] > _PIVOT_TOL:
                ratio = tableau[i, -1] / col[i]
                better = ratio < best_ratio - 1e-15
                tie = abs(ratio - best_ratio) <= 1e-15
                # Bland: on ties the row whose basic variable has the
                # smallest index leaves
                if better or (tie and leaving_row >= 0 and basis[i] < basis[leaving_row]):
                    best_ratio = ratio
                    leaving_row = i
        if leaving_row < 0:
            # cost is bounded below by 0, so an unbounded ray cannot improve
            # it; treat as converged
            break
        pivot = tableau[leaving_row, entering]
        tableau[leaving_row] /= pivot
        for i in range(m):
            if i != leaving_row and abs(tableau[i, entering]) > 1e-15:
                tableau[i] -= tableau[i, entering] * tableau[leaving_row]
        basis[leaving_row] = entering
        iterations += 1

    x_full = np.zeros(n_cols)
    for i, b in enumerate(basis):
        x_full[b] = tableau[i, -1]
    residual = float(cost @ x_full)
    return FeasibilityResult(residual=residual, x=x_full[:n].copy(), iterations=iterations)
