"""Mean-first-passage-time solvers.

Three analytic routes produce the full n x n passage-time matrix M
(m_ij = expected steps from i to the first visit of j):

* `solve_ls` — one minimal-norm least-squares solve per column. Column j's
  system matrix is the identity minus the transition matrix with column j
  zeroed; its right-hand side is the all-ones vector. Columns are
  independent, so the loop parallelizes trivially (`threads`).
* `solve_xu` — the parameterized fixed-point iteration of Xu: factor
  (I - alpha P) once, then iterate two triangular solves per step until the
  iterate stalls below `tol` in the elementwise max norm.
* `solve_fundamental` — the classical finite route through the stationary
  vector and the fundamental matrix Z = (I - P + e pi^T)^{-1}.

`estimate_mc` is the simulation oracle: sample first-passage step counts
along trajectories and report per-cell means and standard errors.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .chain import StochasticMatrix, diagnose, stationary_distribution
from .exceptions import (
    AlphaOutOfRange,
    ConditionWarning,
    IndexOutOfRange,
    MaxIterExceeded,
    NotErgodic,
    ParamOutOfRange,
)
from .linalg import lu_factorize, lu_solve, min_norm_solve

CONDITION_DECAY_LIMIT = 1e12

XU_ALPHA_DEFAULT = 0.5
XU_TOL_DEFAULT = 1e-10
XU_MAX_ITER_DEFAULT = 100_000

MC_HORIZON_FACTOR = 1000


@dataclass(frozen=True)
class MfptMatrix:
    """Passage-time matrix plus provenance (which solver, how it was run)."""

    matrix: np.ndarray
    solver: str
    iterations: int = 0
    alpha: float | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ColumnSystem:
    """Per-target linear system: `matrix` is I - P with column `target` zeroed.

    Column `target` of `matrix` is the standard basis vector e_target; every
    other column equals the corresponding column of I - P.
    """

    target: int
    matrix: np.ndarray


@dataclass(frozen=True)
class XuState:
    """One step of the parameterized iteration: iterate, counter, last move."""

    iterate: np.ndarray
    k: int
    delta: float


@dataclass(frozen=True)
class CensoredCell:
    """Cell (i, j) had `count` trajectories still running at the horizon."""

    i: int
    j: int
    count: int


@dataclass(frozen=True)
class McEstimate:
    """Simulation estimate: cell means, standard errors, censoring flags."""

    mfpt: MfptMatrix
    std_err: np.ndarray
    completed: np.ndarray
    censored: tuple[CensoredCell, ...] = field(default_factory=tuple)


def thread_count(explicit: int | None = None) -> int:
    """Worker threads to use: explicit argument, else MFPT_THREADS, else 0
    (sequential)."""
    if explicit is not None:
        return max(0, int(explicit))
    raw = os.environ.get("MFPT_THREADS", "").strip()
    if not raw:
        return 0
    try:
        return max(0, int(raw))
    except ValueError:
        return 0


def build_column_system(P: StochasticMatrix, i: int) -> ColumnSystem:
    """System whose solution is column i of the passage-time matrix."""
    if not 0 <= i < P.n:
        raise IndexOutOfRange(i, P.n)
    stripped = P.entries.copy()
    stripped[:, i] = 0.0
    matrix = np.eye(P.n) - stripped
    matrix.setflags(write=False)
    return ColumnSystem(target=i, matrix=matrix)


def _require_ergodic(P: StochasticMatrix) -> None:
    d = diagnose(P)
    if not d.ergodic:
        raise NotErgodic(d)


def solve_ls(
    P: StochasticMatrix,
    rank_tol: float | None = None,
    threads: int | None = None,
    use_svd: bool = False,
) -> MfptMatrix:
    """Passage times by independent minimal-norm least-squares columns.

    Deterministic for fixed inputs: with `threads` > 1 the columns are
    solved concurrently but land in disjoint output columns, so the result
    is bitwise identical to the sequential run.

    Raises NotErgodic for chains that are not regular; IncompatibleSystem
    propagates from the kernel only if something upstream is broken.
    """
    _require_ergodic(P)
    n = P.n
    rhs = np.ones(n)
    M = np.empty((n, n))
    decay = np.empty(n)

    def solve_column(j: int) -> None:
        system = build_column_system(P, j)
        sol = min_norm_solve(system.matrix, rhs, rank_tol=rank_tol, use_svd=use_svd)
        M[:, j] = sol.x
        decay[j] = sol.pivot_decay

    workers = thread_count(threads)
    # One BLAS thread per kernel call: the parallelism belongs to the column
    # loop, and alternating multi-threaded BLAS pools thrashes small solves.
    with threadpool_limits(limits=1):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(solve_column, range(n)))
        else:
            for j in range(n):
                solve_column(j)

    worst = int(np.argmax(decay))
    if decay[worst] > CONDITION_DECAY_LIMIT:
        warnings.warn(
            ConditionWarning(
                f"column {worst}: pivot decay ratio {decay[worst]:.3e} exceeds "
                f"{CONDITION_DECAY_LIMIT:.0e}; results may lose accuracy"
            ),
            stacklevel=2,
        )
    M.setflags(write=False)
    return MfptMatrix(matrix=M, solver="ls")


def solve_xu(
    P: StochasticMatrix,
    alpha: float = XU_ALPHA_DEFAULT,
    tol: float = XU_TOL_DEFAULT,
    max_iter: int = XU_MAX_ITER_DEFAULT,
    start: np.ndarray | None = None,
) -> MfptMatrix:
    """Xu's parameterized iteration, one LU factorization reused throughout.

    Each step recomputes the right-hand side
    J + (1 - alpha) P X - P X_d (X_d = diagonal part of X) and runs the
    forward/back substitution pair. Stops when the elementwise max norm of
    the move drops below `tol`.

    Convergence depends on alpha and on the chain; a bad combination raises
    MaxIterExceeded (immediately, with delta = inf, if the iterate blows
    up past floating-point range).
    """
    if not 0.0 <= alpha < 1.0:
        raise AlphaOutOfRange(alpha)
    n = P.n
    entries = P.entries
    ones = np.ones((n, n))
    # Single-threaded BLAS: each step alternates a matmul and two triangular
    # solves on modest matrices, where pool hand-offs dominate the math.
    with threadpool_limits(limits=1):
        factors = lu_factorize(np.eye(n) - alpha * entries)
        X = ones.copy() if start is None else np.array(start, dtype=float)
        state = XuState(iterate=X, k=0, delta=float("inf"))
        for k in range(1, max_iter + 1):
            rhs = ones + (1.0 - alpha) * (entries @ X) - entries * np.diag(X)[None, :]
            X_next = lu_solve(factors, rhs)
            delta = float(np.max(np.abs(X_next - X)))
            X = X_next
            state = XuState(iterate=X, k=k, delta=delta)
            if not np.isfinite(delta):
                raise MaxIterExceeded(k, delta)
            if delta < tol:
                X.setflags(write=False)
                return MfptMatrix(matrix=X, solver="xu", iterations=k, alpha=alpha)
    raise MaxIterExceeded(state.k, state.delta)


def solve_fundamental(P: StochasticMatrix) -> MfptMatrix:
    """Classical finite method via the fundamental matrix.

    Computes pi, inverts I - P + e pi^T with a dense LU solve, then reads
    off m_ij = (z_jj - z_ij) / pi_j and m_ii = 1 / pi_i.
    """
    n = P.n
    with threadpool_limits(limits=1):
        pi = stationary_distribution(P).pi
        Z = np.linalg.solve(np.eye(n) - P.entries + np.outer(np.ones(n), pi), np.eye(n))
        M = (np.diag(Z)[None, :] - Z) / pi[None, :]
    np.fill_diagonal(M, 1.0 / pi)
    M.setflags(write=False)
    return MfptMatrix(matrix=M, solver="fundamental")


def estimate_mc(
    P: StochasticMatrix,
    trials: int,
    seed: int,
    horizon: int | None = None,
) -> McEstimate:
    """Monte Carlo estimate of every passage time, with standard errors.

    Cell (i, j) averages first-passage step counts over `trials`
    trajectories started at i (the diagonal measures first return).
    Trajectories still running after `horizon` steps (default 1000 n) are
    dropped from the cell mean and the cell is flagged instead of biasing
    the estimate; a cell with no completed trajectory reports NaN.

    Each cell draws from its own generator seeded by (seed, i, j), so
    results are reproducible and independent of evaluation order.
    """
    if trials < 1:
        raise ParamOutOfRange(f"trials must be >= 1, got {trials}")
    n = P.n
    if horizon is None:
        horizon = MC_HORIZON_FACTOR * n
    if horizon < n:
        raise ParamOutOfRange(f"horizon must be >= n, got {horizon}")
    cum = np.cumsum(P.entries, axis=1)
    cum[:, -1] = 1.0  # guard roundoff so every uniform draw lands in a bin

    means = np.empty((n, n))
    std_err = np.empty((n, n))
    completed = np.empty((n, n), dtype=np.int64)
    censored = []
    for i in range(n):
        for j in range(n):
            rng = np.random.default_rng([seed, i, j])
            samples, n_censored = _simulate_cell(cum, i, j, trials, horizon, rng)
            completed[i, j] = samples.size
            if n_censored:
                censored.append(CensoredCell(i=i, j=j, count=n_censored))
            if samples.size == 0:
                means[i, j] = np.nan
                std_err[i, j] = np.nan
            else:
                means[i, j] = samples.mean()
                spread = samples.std(ddof=1) if samples.size > 1 else 0.0
                std_err[i, j] = spread / np.sqrt(samples.size)
    means.setflags(write=False)
    return McEstimate(
        mfpt=MfptMatrix(matrix=means, solver="mc"),
        std_err=std_err,
        completed=completed,
        censored=tuple(censored),
    )


def _simulate_cell(cum, i, j, trials, horizon, rng):
    """First-passage step counts from i to j; returns (samples, censored)."""
    state = np.full(trials, i, dtype=np.intp)
    step_values = []
    step_counts = []
    t = 0
    while state.size and t < horizon:
        t += 1
        u = rng.random(state.size)
        state = (u[:, None] < cum[state]).argmax(axis=1)
        hit = state == j
        n_hit = int(hit.sum())
        if n_hit:
            step_values.append(t)
            step_counts.append(n_hit)
            state = state[~hit]
    samples = np.repeat(np.asarray(step_values, dtype=float), step_counts)
    return samples, int(state.size)
