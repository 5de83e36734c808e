"""Solver-quality indices: the residual matrix, PZE, ORE, and wall time.

The residual of a candidate passage-time matrix M is
eps_ij = m_ij - sum_{k != j} p_ik m_kj - 1, zero exactly when M solves the
defining equations. PZE (fraction of residuals equal to floating-point
zero) is machine-sensitive and therefore reported, never asserted; ORE
(sum of absolute residuals) is the portable accuracy index.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, TypeVar

import numpy as np

from .chain import StochasticMatrix
from .exceptions import DimensionMismatch
from .solvers import MfptMatrix

NEAR_ZERO_TOL = 1e-12

R = TypeVar("R")


@dataclass(frozen=True)
class ResidualReport:
    epsilon: np.ndarray
    pze: float
    near_zero_frac: float
    ore: float
    wall_time_s: float
    solver_tag: str
    n: int


def residual_matrix(P: StochasticMatrix, M) -> np.ndarray:
    """eps_ij = m_ij - sum_{k != j} p_ik m_kj - 1, elementwise.

    The k = j term is excluded by zeroing the diagonal of M before the
    product, which adds exact zeros to the sums instead of subtracting a
    correction afterwards.
    """
    values = M.matrix if isinstance(M, MfptMatrix) else np.asarray(M, dtype=float)
    if values.shape != P.entries.shape:
        raise DimensionMismatch(P.entries.shape, values.shape)
    hollow = values.copy()
    np.fill_diagonal(hollow, 0.0)
    return values - P.entries @ hollow - 1.0


def pze(epsilon: np.ndarray) -> float:
    """Fraction of residual entries equal to floating-point zero."""
    epsilon = np.asarray(epsilon)
    return float(np.count_nonzero(epsilon == 0.0) / epsilon.size)


def near_zero_fraction(epsilon: np.ndarray, tol: float = NEAR_ZERO_TOL) -> float:
    """Fraction of residual entries within `tol` of zero (reported alongside
    pze, which counts exact zeros only)."""
    epsilon = np.asarray(epsilon)
    return float(np.count_nonzero(np.abs(epsilon) <= tol) / epsilon.size)


def ore(epsilon: np.ndarray) -> float:
    """Sum of absolute residuals, accumulated exactly (fsum over the
    row-major order), so repeated calls are bitwise identical."""
    return math.fsum(np.abs(np.asarray(epsilon)).ravel())


def timed(f: Callable[..., R], *args, **kwargs) -> tuple[R, float]:
    """Run f and return (result, wall seconds on the monotonic clock)."""
    t0 = time.perf_counter()
    result = f(*args, **kwargs)
    return result, time.perf_counter() - t0


def report(P: StochasticMatrix, M: MfptMatrix, wall_time_s: float = 0.0) -> ResidualReport:
    """Bundle all indices for one solver output."""
    eps = residual_matrix(P, M)
    return ResidualReport(
        epsilon=eps,
        pze=pze(eps),
        near_zero_frac=near_zero_fraction(eps),
        ore=ore(eps),
        wall_time_s=wall_time_s,
        solver_tag=M.solver,
        n=P.n,
    )
