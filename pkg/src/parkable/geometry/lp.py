"""Small dense linear programming.

The problems met in this library have very few variables (a translation
vector, a direction, a slack) and up to a few thousand inequality
constraints.  They are solved through their dual, which is a standard-form
problem with ``dim + 1`` rows, by a revised two-phase simplex method using
Dantzig pricing with a fall back to Bland's rule when pivots stall.  The
basis is tiny, so every pivot is a handful of vectorized numpy operations
over the columns.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError

_PIVOT_TOL = 1e-11
_COST_TOL = 1e-11


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of :func:`lp_feasible`.

    ``margin`` is the largest ``t`` such that ``a_i . x + t <= b_i`` holds for
    all (unit-normalized) rows, capped at ``cap``.  It is the inradius of the
    feasible region when positive and minus the uniform relaxation needed to
    make the system feasible when negative.
    """

    status: Status
    witness: np.ndarray | None
    margin: float

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


@dataclass(frozen=True)
class LPSolution:
    optimal: bool
    x: np.ndarray | None
    value: float
    reason: str = ""


def _simplex_standard(M, r, c, basis, max_iter):
    """Revised simplex on ``min c.y  s.t.  M y = r, y >= 0`` from a feasible basis.

    Returns ``(basis, y_B, status)`` with status in {"optimal", "unbounded",
    "iterations"}.  The entering column is the most negative reduced cost
    (Dantzig); after a run of degenerate pivots the rule switches to Bland's
    smallest-index rule for the rest of the solve, which cannot cycle.
    """
    m, n = M.shape
    basis = list(basis)
    bland = False
    stalled = 0
    for _ in range(max_iter):
        B_inv = np.linalg.inv(M[:, basis])
        y_b = B_inv @ r
        pi = c[basis] @ B_inv
        reduced = c - pi @ M
        reduced[basis] = 0.0
        if bland:
            candidates = np.flatnonzero(reduced < -_COST_TOL)
            if candidates.size == 0:
                return basis, y_b, "optimal"
            enter = int(candidates[0])
        else:
            enter = int(np.argmin(reduced))
            if reduced[enter] >= -_COST_TOL:
                return basis, y_b, "optimal"
        direction = B_inv @ M[:, enter]
        positive = direction > _PIVOT_TOL
        if not positive.any():
            return basis, y_b, "unbounded"
        ratios = np.full(m, np.inf)
        ratios[positive] = np.maximum(y_b[positive], 0.0) / direction[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-14 * max(1.0, abs(best)))
        leave_row = min(ties, key=lambda i: basis[i])
        basis[leave_row] = enter
        stalled = stalled + 1 if best <= 1e-14 else 0
        if stalled > 2 * m:
            bland = True
    return basis, np.linalg.solve(M[:, basis], r), "iterations"


def solve_lp(c, A, b, max_iter: int = 20000) -> LPSolution:
    """Minimize ``c . x`` subject to ``A x <= b`` with ``x`` free.

    The caller is responsible for making the problem bounded (add box rows
    when in doubt).  An infeasible or unbounded primal is reported with
    ``optimal=False``.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    if not (np.isfinite(A).all() and np.isfinite(b).all() and np.isfinite(c).all()):
        raise GeometryError("LP data contains NaN or infinite entries")
    n_rows, n_vars = A.shape
    if c.shape != (n_vars,) or b.shape != (n_rows,):
        raise GeometryError("LP data has inconsistent shapes")

    # dual: min b.y  s.t.  A^T y = -c,  y >= 0
    M = A.T.copy()
    r = -c.copy()
    flip = r < 0
    M[flip] *= -1.0
    r[flip] *= -1.0
    m = n_vars

    # phase I with one artificial per row
    M1 = np.hstack([M, np.eye(m)])
    c1 = np.concatenate([np.zeros(n_rows), np.ones(m)])
    basis = list(range(n_rows, n_rows + m))
    basis, y_b, status = _simplex_standard(M1, r, c1, basis, max_iter)
    if status == "iterations":
        raise GeometryError("simplex phase I did not terminate")
    if c1[basis] @ y_b > 1e-9 * max(1.0, np.abs(r).max(initial=0.0)):
        return LPSolution(False, None, np.nan, "dual infeasible")

    # drive zero-level artificials out of the basis where possible
    for row, var in enumerate(list(basis)):
        if var < n_rows:
            continue
        Bm = M1[:, basis]
        row_of_inverse = np.linalg.solve(Bm.T, np.eye(m)[row])
        coeffs = row_of_inverse @ M
        coeffs[[v for v in basis if v < n_rows]] = 0.0
        swap = np.flatnonzero(np.abs(coeffs) > 1e-9)
        if swap.size:
            basis[row] = int(swap[0])
    redundant = [i for i, v in enumerate(basis) if v >= n_rows]
    if redundant:
        # rows of A^T that are linearly dependent: keep the artificials,
        # pinned at zero by giving them a prohibitive cost
        cost = np.concatenate([b, np.full(m, 1e12)])
        M2 = M1
    else:
        cost = b.copy()
        M2 = M
    basis, y_b, status = _simplex_standard(M2, r, cost, basis, max_iter)
    if status == "iterations":
        raise GeometryError("simplex phase II did not terminate")
    if status == "unbounded":
        return LPSolution(False, None, np.nan, "primal infeasible")
    pi = np.linalg.solve(M2[:, basis].T, cost[basis])
    x = pi.copy()
    x[flip] *= -1.0
    return LPSolution(True, x, float(c @ x))


def normalize_rows(A, b):
    """Scale each inequality to a unit normal; drop vacuous zero rows.

    Returns ``(A, b, contradiction)``; ``contradiction`` is set when a zero
    row demands ``0 <= b`` with ``b`` negative.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    norms = np.linalg.norm(A, axis=1)
    zero = norms <= 1e-14
    contradiction = bool(np.any(b[zero] < 0))
    keep = ~zero
    return A[keep] / norms[keep, None], b[keep] / norms[keep], contradiction


def lp_feasible(A, b, tol: float = 1e-9, cap: float = 1.0) -> FeasibilityResult:
    """Decide whether ``{x : A x <= b}`` is nonempty.

    Solves ``max t  s.t.  A x + t <= b,  t <= cap`` which always has an
    optimum; the system is feasible when ``t >= -tol``.  Unbounded feasible
    regions are simply feasible.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    if np.isnan(A).any() or np.isnan(b).any():
        raise GeometryError("NaN in constraint data")
    if A.shape[0] != b.shape[0]:
        raise GeometryError("constraint normals and offsets differ in length")
    dim = A.shape[1]
    An, bn, contradiction = normalize_rows(A, b)
    if contradiction:
        return FeasibilityResult(Status.INFEASIBLE, None, -np.inf)
    if An.shape[0] == 0:
        return FeasibilityResult(Status.FEASIBLE, np.zeros(dim), cap)
    rows = np.hstack([An, np.ones((An.shape[0], 1))])
    cap_row = np.zeros((1, dim + 1))
    cap_row[0, -1] = 1.0
    sol = solve_lp(
        np.concatenate([np.zeros(dim), [-1.0]]),
        np.vstack([rows, cap_row]),
        np.concatenate([bn, [cap]]),
    )
    if not sol.optimal:  # pragma: no cover - the capped problem is always solvable
        raise GeometryError(f"feasibility LP failed: {sol.reason}")
    x, t = sol.x[:dim], float(sol.x[-1])
    if t >= -tol:
        return FeasibilityResult(Status.FEASIBLE, x, t)
    return FeasibilityResult(Status.INFEASIBLE, None, t)
