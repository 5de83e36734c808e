"""Validated stochastic matrices, structural diagnosis, and stationary vectors.

A transition matrix enters the package through :func:`validate_stochastic`
and is carried around as an immutable :class:`StochasticMatrix` afterwards,
so the solvers never re-check non-negativity or row sums.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    NegativeEntry,
    NotSquare,
    RowSumViolation,
    SingularSystem,
)

ROW_SUM_TOL = 1e-12
STATIONARY_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class StochasticMatrix:
    """Row-stochastic n x n transition matrix; entries[i, j] = P(i -> j)."""

    n: int
    entries: np.ndarray

    @property
    def support(self) -> np.ndarray:
        """Boolean adjacency of the transition digraph (edge where p_ij > 0)."""
        return self.entries > 0.0


@dataclass(frozen=True)
class StationaryDistribution:
    """Probability row vector pi with pi P = pi."""

    pi: np.ndarray


@dataclass(frozen=True)
class ChainDiagnosis:
    irreducible: bool
    aperiodic: bool
    period: int

    @property
    def ergodic(self) -> bool:
        return self.irreducible and self.aperiodic


def validate_stochastic(raw, row_sum_tol: float = ROW_SUM_TOL) -> StochasticMatrix:
    """Check non-negativity and row sums, returning an immutable matrix.

    Entries are copied, never modified; callers wanting re-normalization
    (e.g. for matrices printed with truncated decimals) must divide rows by
    their sums before calling.

    Raises NotSquare, NegativeEntry, or RowSumViolation.
    """
    entries = np.array(raw, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 2:
        raise NotSquare(entries.shape)
    n = entries.shape[0]
    bad = np.argwhere(entries < 0.0)
    if bad.size:
        i, j = bad[0]
        raise NegativeEntry(int(i), int(j), float(entries[i, j]))
    sums = entries.sum(axis=1)
    off = np.abs(sums - 1.0)
    worst = int(np.argmax(off))
    if off[worst] > row_sum_tol:
        raise RowSumViolation(worst, float(sums[worst]))
    entries.setflags(write=False)
    return StochasticMatrix(n=n, entries=entries)


def _strongly_connected(adj: np.ndarray) -> bool:
    """Strong connectivity via forward and reverse BFS from state 0."""
    return bool(_reachable(adj, 0).all() and _reachable(adj.T, 0).all())


def _reachable(adj: np.ndarray, start: int) -> np.ndarray:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            if not seen[v]:
                seen[v] = True
                queue.append(int(v))
    return seen


def _period_from_state0(adj: np.ndarray) -> int:
    """gcd of cycle lengths through state 0, via BFS level differences.

    For every support edge u -> v reachable from 0, dist(u) + 1 - dist(v)
    folds into the gcd; the result is the chain period when the support is
    strongly connected (and state 0's cycle gcd otherwise).
    """
    n = adj.shape[0]
    dist = np.full(n, -1, dtype=int)
    dist[0] = 0
    queue = deque([0])
    order = [0]
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(int(v))
                order.append(int(v))
    g = 0
    for u in order:
        for v in np.flatnonzero(adj[u]):
            g = math.gcd(g, dist[u] + 1 - dist[v])
    return max(g, 1)


def diagnose(P: StochasticMatrix) -> ChainDiagnosis:
    """Structural irreducibility/aperiodicity of the support digraph.

    Purely structural: entry magnitudes are ignored, only the zero pattern
    matters, so the diagnosis is invariant under positive row re-weighting.
    """
    adj = P.support
    irreducible = _strongly_connected(adj)
    period = _period_from_state0(adj)
    return ChainDiagnosis(irreducible=irreducible, aperiodic=period == 1, period=period)


def stationary_distribution(P: StochasticMatrix) -> StationaryDistribution:
    """Solve pi P = pi, sum(pi) = 1 by one dense LU solve.

    The singular balance system (I - P^T) pi = 0 has its last equation
    replaced by the normalization row, which makes it nonsingular exactly
    when the chain is irreducible.

    Raises SingularSystem when the chain is numerically reducible.
    """
    n = P.n
    A = np.eye(n) - P.entries.T
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    residual = float(np.max(np.abs(pi @ P.entries - pi)))
    if not np.isfinite(residual) or residual > STATIONARY_RESIDUAL_TOL:
        raise SingularSystem(
            f"stationary residual {residual:.3e} exceeds {STATIONARY_RESIDUAL_TOL:.0e}"
        )
    pi.setflags(write=False)
    return StationaryDistribution(pi=pi)
