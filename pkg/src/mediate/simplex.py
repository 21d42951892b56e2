"""Dense two-phase simplex for the small allocation programs built here.

Solves ``max c.x`` subject to ``A.x <= b``, ``x >= 0``. Rows with negative
right-hand sides get artificial variables and a feasibility phase first.
Entering and leaving choices follow Bland's smallest-index rule, which makes
the pivot order deterministic and rules out cycling. Problems in this
package have a handful of variables, so clarity wins over sparsity tricks;
reduced costs are recomputed from scratch every pivot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """``max objective @ x`` with rows ``lhs @ x <= rhs`` and ``x >= 0``."""

    objective: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    variable_names: tuple[str, ...] = ()
    row_names: tuple[str, ...] = ()

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        self.lhs = np.atleast_2d(np.asarray(self.lhs, dtype=float))
        self.rhs = np.asarray(self.rhs, dtype=float)
        rows, cols = self.lhs.shape
        if self.objective.shape != (cols,) or self.rhs.shape != (rows,):
            raise ValueError(
                f"inconsistent LP dimensions: lhs {self.lhs.shape}, "
                f"objective {self.objective.shape}, rhs {self.rhs.shape}"
            )
        if not (
            np.isfinite(self.objective).all()
            and np.isfinite(self.lhs).all()
            and np.isfinite(self.rhs).all()
        ):
            raise ValueError("LP coefficients must all be finite")
        if not self.variable_names:
            self.variable_names = tuple(f"x{j}" for j in range(cols))
        if not self.row_names:
            self.row_names = tuple(f"row{i}" for i in range(rows))


@dataclass(frozen=True)
class SimplexResult:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _iterate(
    tableau: np.ndarray,
    basis: list[int],
    cost: np.ndarray,
    tol: float,
    max_iterations: int,
) -> tuple[str, int]:
    rows = tableau.shape[0]
    ncols = tableau.shape[1] - 1
    for iteration in range(max_iterations):
        reduced = cost[:ncols].copy()
        for r in range(rows):
            weight = cost[basis[r]]
            if weight != 0.0:
                reduced -= weight * tableau[r, :ncols]
        in_basis = set(basis)
        entering = -1
        for j in range(ncols):
            if j not in in_basis and reduced[j] > tol:
                entering = j
                break
        if entering < 0:
            return OPTIMAL, iteration
        leaving = -1
        best = math.inf
        for r in range(rows):
            coef = tableau[r, entering]
            if coef <= tol:
                continue
            ratio = tableau[r, -1] / coef
            if leaving < 0 or ratio < best - tol:
                best, leaving = ratio, r
            elif ratio <= best + tol and basis[r] < basis[leaving]:
                best, leaving = min(best, ratio), r
        if leaving < 0:
            return UNBOUNDED, iteration + 1
        _pivot(tableau, basis, leaving, entering)
    raise ArithmeticError("simplex exceeded its iteration budget")


def simplex_solve(
    lp: LinearProgram, tol: float = 1e-9, max_iterations: int = 10_000
) -> SimplexResult:
    """Vertex-optimal solution of the LP, or a distinct infeasible/unbounded signal."""
    nrows, nvars = lp.lhs.shape
    lhs = lp.lhs.copy()
    rhs = lp.rhs.copy()
    flip = rhs < 0
    lhs[flip] *= -1.0
    rhs[flip] *= -1.0
    slack = np.eye(nrows)
    slack[flip, flip] = -1.0
    flipped_rows = np.flatnonzero(flip)
    n_art = flipped_rows.size
    artificial = np.zeros((nrows, n_art))
    artificial[flipped_rows, np.arange(n_art)] = 1.0

    tableau = np.hstack([lhs, slack, artificial, rhs[:, None]])
    basis = list(range(nvars, nvars + nrows))
    for j, r in enumerate(flipped_rows):
        basis[r] = nvars + nrows + j
    iterations = 0

    if n_art:
        phase_cost = np.zeros(nvars + nrows + n_art)
        phase_cost[nvars + nrows :] = -1.0
        status, done = _iterate(tableau, basis, phase_cost, tol, max_iterations)
        iterations += done
        if status != OPTIMAL:  # phase 1 is bounded; anything else is a failure
            return SimplexResult(status=INFEASIBLE, iterations=iterations)
        residual = sum(tableau[r, -1] for r in range(len(basis)) if basis[r] >= nvars + nrows)
        if residual > tol * max(1.0, float(np.abs(rhs).max(initial=0.0))):
            return SimplexResult(status=INFEASIBLE, iterations=iterations)
        # drive surviving artificials out of the basis, dropping redundant rows
        for r in range(len(basis) - 1, -1, -1):
            if basis[r] >= nvars + nrows:
                col = next(
                    (j for j in range(nvars + nrows) if abs(tableau[r, j]) > tol), None
                )
                if col is None:
                    tableau = np.delete(tableau, r, axis=0)
                    del basis[r]
                else:
                    _pivot(tableau, basis, r, col)
        tableau = np.delete(tableau, np.s_[nvars + nrows : nvars + nrows + n_art], axis=1)

    cost = np.concatenate([lp.objective, np.zeros(tableau.shape[1] - 1 - nvars)])
    status, done = _iterate(tableau, basis, cost, tol, max_iterations)
    iterations += done
    if status != OPTIMAL:
        return SimplexResult(status=status, iterations=iterations)
    x = np.zeros(nvars)
    for r, j in enumerate(basis):
        if j < nvars:
            x[j] = tableau[r, -1]
    x[np.abs(x) < tol] = 0.0
    return SimplexResult(
        status=OPTIMAL, x=x, objective=float(lp.objective @ x), iterations=iterations
    )
