"""Mean first passage times of finite ergodic Markov chains.

Solvers: per-column minimal-norm least squares (`solve_ls`), the
parameterized fixed-point iteration (`solve_xu`), the fundamental-matrix
baseline (`solve_fundamental`), and a Monte Carlo estimator
(`estimate_mc`), with residual metrics, matrix generators, and a benchmark
CLI (`mfpt`).
"""

from .chain import (
    ChainDiagnosis,
    StationaryDistribution,
    StochasticMatrix,
    diagnose,
    stationary_distribution,
    validate_stochastic,
)
from .dense_txt import load_dense, save_dense
from .generators import (
    FIXTURE_NAMES,
    GeneratorSpec,
    fixture,
    fixture_raw,
    random_sparse,
    random_walk,
    two_state,
    two_state_exact,
)
from .linalg import LuFactors, MinNormSolution, lu_factorize, lu_solve, min_norm_solve
from .metrics import (
    ResidualReport,
    near_zero_fraction,
    ore,
    pze,
    report,
    residual_matrix,
    timed,
)
from .solvers import (
    CensoredCell,
    ColumnSystem,
    McEstimate,
    MfptMatrix,
    XuState,
    build_column_system,
    estimate_mc,
    solve_fundamental,
    solve_ls,
    solve_xu,
)

__all__ = [
    "CensoredCell",
    "ChainDiagnosis",
    "ColumnSystem",
    "FIXTURE_NAMES",
    "GeneratorSpec",
    "LuFactors",
    "McEstimate",
    "MfptMatrix",
    "MinNormSolution",
    "ResidualReport",
    "StationaryDistribution",
    "StochasticMatrix",
    "XuState",
    "build_column_system",
    "diagnose",
    "estimate_mc",
    "fixture",
    "fixture_raw",
    "load_dense",
    "lu_factorize",
    "lu_solve",
    "min_norm_solve",
    "near_zero_fraction",
    "ore",
    "pze",
    "random_sparse",
    "random_walk",
    "report",
    "residual_matrix",
    "save_dense",
    "solve_fundamental",
    "solve_ls",
    "solve_xu",
    "stationary_distribution",
    "timed",
    "two_state",
    "two_state_exact",
    "validate_stochastic",
]

__version__ = "0.1.0"
