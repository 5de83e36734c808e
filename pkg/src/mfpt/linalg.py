"""Dense factorization kernels for the passage-time solvers.

`min_norm_solve` applies the pseudoinverse without ever forming it: a
column-pivoted QR detects numerical rank, and a second orthogonal
factorization of the rank-deficient triangle (a complete orthogonal
decomposition) picks the minimal-norm member of the least-squares solution
set. `lu_factorize`/`lu_solve` back the parameterized iteration, which
reuses one factorization across all iterations.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .exceptions import IncompatibleSystem, SingularPivot

log = logging.getLogger(__name__)

COMPAT_RESIDUAL_FACTOR = 1e-6
PIVOT_TOL_FACTOR = 1e-14


def default_rank_tol(A: np.ndarray) -> float:
    """n * eps * ||A||_inf, the standard rank-revealing cutoff.

    Floored at the smallest normal double so the cutoff stays positive even
    for a zero matrix (whose rank must come out 0, not full).
    """
    n = A.shape[0]
    return max(
        n * np.finfo(float).eps * float(np.linalg.norm(A, np.inf)),
        float(np.finfo(float).tiny),
    )


@dataclass(frozen=True)
class MinNormSolution:
    """Minimal-norm least-squares solution, with the rank the QR detected.

    `pivot_decay` is |R_00| / |R_rr| over the retained pivots; it is the
    only conditioning signal this kernel reports.
    """

    x: np.ndarray
    rank: int
    residual_norm: float
    pivot_decay: float


@dataclass(frozen=True)
class LuFactors:
    """Partial-pivoted factorization: A[perm] = L @ U, L unit lower."""

    L: np.ndarray
    U: np.ndarray
    perm: np.ndarray


def min_norm_solve(A, b, rank_tol: float | None = None, use_svd: bool = False) -> MinNormSolution:
    """Minimal-norm least-squares solution of the square system A x = b.

    Column-pivoted QR reveals the numerical rank r (pivots below `rank_tol`
    are dropped; default n*eps*||A||_inf). For full rank the triangular
    solve already gives the unique solution; otherwise the leading r rows
    of R are orthogonally factorized a second time and the minimal-norm
    solution is read off. `use_svd=True` swaps in an SVD route for
    debugging; results agree to roundoff.

    Raises IncompatibleSystem when the residual exceeds 1e-6 * max(1, ||b||),
    which passage-time systems never do unless something upstream is broken.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[0]
    if rank_tol is None:
        rank_tol = default_rank_tol(A)
    if use_svd:
        x, rank, pivot_decay = _min_norm_svd(A, b, rank_tol)
    else:
        x, rank, pivot_decay = _min_norm_cod(A, b, rank_tol)
    residual_norm = float(np.linalg.norm(A @ x - b))
    log.debug(
        "min_norm_solve: n=%d rank=%d pivot_decay=%.3e residual=%.3e",
        n, rank, pivot_decay, residual_norm,
    )
    if residual_norm > COMPAT_RESIDUAL_FACTOR * max(1.0, float(np.linalg.norm(b))):
        raise IncompatibleSystem(residual_norm)
    x.setflags(write=False)
    return MinNormSolution(x=x, rank=rank, residual_norm=residual_norm, pivot_decay=pivot_decay)


def _min_norm_cod(A, b, rank_tol):
    n = A.shape[0]
    Q, R, piv = sla.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.count_nonzero(diag >= rank_tol))
    if rank == 0:
        return np.zeros(n), 0, float("inf")
    pivot_decay = float(diag[0] / diag[rank - 1])
    c = Q.T[:rank] @ b
    if rank == n:
        z = sla.solve_triangular(R, c)
    else:
        # Complete the decomposition: R[:r]^T = Z [T; 0] with T triangular,
        # so A Pi = Q_r [T^T 0] Z^T and the minimal-norm solution zeroes the
        # trailing block of Z^T y.
        Z, T = sla.qr(R[:rank].T, mode="economic")
        w = sla.solve_triangular(T.T, c, lower=True)
        z = Z @ w
    x = np.empty(n)
    x[piv] = z
    return x, rank, pivot_decay


def _min_norm_svd(A, b, rank_tol):
    U, s, Vt = np.linalg.svd(A)
    rank = int(np.count_nonzero(s >= rank_tol))
    if rank == 0:
        return np.zeros(A.shape[0]), 0, float("inf")
    pivot_decay = float(s[0] / s[rank - 1])
    x = Vt[:rank].T @ ((U.T[:rank] @ b) / s[:rank])
    return x, rank, pivot_decay


def lu_factorize(A) -> LuFactors:
    """Partial-pivoted LU; raises SingularPivot when a pivot underflows
    1e-14 * ||A||_inf."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    with warnings.catch_warnings():
        # singular input is reported via SingularPivot below, not a warning
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    pivot_floor = PIVOT_TOL_FACTOR * float(np.linalg.norm(A, np.inf))
    u_diag = np.abs(np.diag(lu))
    small = np.flatnonzero(u_diag < pivot_floor)
    if small.size:
        k = int(small[0])
        raise SingularPivot(k, float(u_diag[k]))
    # LAPACK piv is a sequence of row swaps; unroll it into one permutation
    # so that A[perm] == L @ U.
    perm = np.arange(n)
    for k, p in enumerate(piv):
        perm[k], perm[p] = perm[p], perm[k]
    L = np.tril(lu, -1) + np.eye(n)
    U = np.triu(lu)
    for arr in (L, U, perm):
        arr.setflags(write=False)
    return LuFactors(L=L, U=U, perm=perm)


def lu_solve(f: LuFactors, B) -> np.ndarray:
    """Solve A X = B from the factors: forward then back substitution."""
    B = np.asarray(B, dtype=float)
    Y = sla.solve_triangular(f.L, B[f.perm], lower=True, unit_diagonal=True, check_finite=False)
    return sla.solve_triangular(f.U, Y, check_finite=False)
