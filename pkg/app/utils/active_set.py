"""
Primal active-set method for the nonnegative minimum-norm representation

    minimize ||x||_2^2  subject to  A x = b,  x >= 0

started from a feasible point. The working set holds indices fixed at zero.
Bland's rule (smallest index) picks the constraint to add or drop.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class ActiveSetResult:
    x: np.ndarray
    converged: bool
    iterations: int
    working_set: Tuple[int, ...]
    multipliers_min: float
    kkt_residual: float


def _multipliers(A: np.ndarray, x: np.ndarray, free: np.ndarray) -> np.ndarray:
    """Bound multipliers mu = x - A^T lam with lam fitted on the free columns."""
    lam, _, _, _ = np.linalg.lstsq(A[:, free].T, x[free], rcond=None)
    mu = x - A.T @ lam
    mu[free] = 0.0
    return mu


def min_norm_nonnegative(A, b, x0, tol: float = 1e-12, max_iter: int = 100) -> ActiveSetResult:
    """
    Solve the nonnegative minimum-norm problem from a feasible start.

    Args:
        A: Constraint matrix, shape (m, n)
        b: Right-hand side, shape (m,)
        x0: Feasible starting point (A x0 = b, x0 >= 0)
        tol: Tolerance on steps, multipliers and feasibility
        max_iter: Maximum number of working-set changes

    Returns:
        ActiveSetResult with the final point, working set and KKT diagnostics
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.array(x0, dtype=float)
    n = A.shape[1]

    working = np.asarray(x <= 0.0)
    x[working] = 0.0
    tried = set()
    converged = False

    iterations = 0
    while iterations < max_iter:
        iterations += 1
        free = ~working

        # Equality-constrained subproblem on the free columns: its solution is the
        # minimum-norm solution of A_F y = b, which lstsq returns directly.
        target = np.zeros(n)
        if np.any(free):
            y, _, _, _ = np.linalg.lstsq(A[:, free], b, rcond=None)
            target[free] = y
        step = target - x

        if np.max(np.abs(step)) <= tol * max(1.0, np.max(np.abs(x))):
            mu = _multipliers(A, x, free)
            negative = [i for i in np.flatnonzero(working) if mu[i] < -tol and i not in tried]
            if not negative:
                converged = True
                break
            j = int(min(negative))
            working[j] = False
            tried.add(j)
            continue

        blocking = np.flatnonzero(free & (step < 0.0))
        alpha = 1.0
        blocker = None
        for i in blocking:
            ratio = x[i] / -step[i]
            if ratio < alpha:
                alpha, blocker = ratio, int(i)
        x = x + alpha * step
        if blocker is not None:
            working[blocker] = True
            x[blocker] = 0.0
        if alpha > 0.0:
            tried.clear()
        x[working] = 0.0

    free = ~working
    mu = _multipliers(A, x, free) if np.any(free) else x.copy()
    mu_working = mu[working]
    multipliers_min = float(np.min(mu_working)) if mu_working.size else 0.0
    kkt_residual = float(max(
        np.max(np.abs(A @ x - b)),
        max(0.0, -float(np.min(x))),
        max(0.0, -multipliers_min),
    ))

    return ActiveSetResult(
        x=x,
        converged=converged,
        iterations=iterations,
        working_set=tuple(int(i) for i in np.flatnonzero(working)),
        multipliers_min=multipliers_min,
        kkt_residual=kkt_residual,
    )
