"""Test-matrix sources: published fixtures, random families, closed-form chains.

The fixture matrices are embedded exactly as printed in their source (six
decimals, rows summing to 1 only within ~1e-6), so `fixture` re-normalizes
each row by its own sum before validation; `fixture_raw` exposes the
printed values for export.

Random generation uses numpy's PCG64 via `default_rng(seed)`. The
algorithm is named and seedable, so identical seeds give identical
matrices within this implementation; only density statistics are
comparable across reimplementations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import StochasticMatrix, diagnose, validate_stochastic
from .exceptions import GenerationFailed, ParamOutOfRange, UnknownFixture

MAX_RESAMPLE_ATTEMPTS = 1000

_FIXTURES = {
    "P1": [
        [0.136267, 0.292549, 0.266992, 0.220856, 0.083335],
        [0.198798, 0.019347, 0.129998, 0.321252, 0.330605],
        [0.246269, 0.215116, 0.044021, 0.249831, 0.244763],
        [0.400950, 0.149352, 0.012546, 0.303336, 0.133815],
        [0.200328, 0.084084, 0.351278, 0.337325, 0.026985],
    ],
    "P2": [
        [0.268031, 0.255740, 0.201497, 0.265012, 0.007385, 0.002335],
        [0.166582, 0.137728, 0.032748, 0.118446, 0.187835, 0.356660],
        [0.093279, 0.226108, 0.081331, 0.206803, 0.094199, 0.298281],
        [0.103853, 0.230590, 0.261709, 0.069110, 0.061473, 0.273265],
        [0.101657, 0.261742, 0.128131, 0.002138, 0.204864, 0.301467],
        [0.216100, 0.210158, 0.154059, 0.178624, 0.213131, 0.027928],
    ],
    "P3": [
        [0.000000, 0.701299, 0.298701, 0.000000, 0.000000],
        [0.000000, 0.000000, 0.437907, 0.562093, 0.000000],
        [0.000000, 0.000000, 0.000000, 0.632082, 0.367918],
        [0.471475, 0.000000, 0.000000, 0.000000, 0.528525],
        [0.461323, 0.538677, 0.000000, 0.000000, 0.000000],
    ],
    "P4": [
        [0.999999, 1e-7, 2e-7, 3e-7, 4e-7],
        [0.4, 0.3, 0.0, 0.0, 0.3],
        [5e-7, 0.0, 0.999999, 0.0, 5e-7],
        [5e-7, 0.0, 0.0, 0.999999, 5e-7],
        [2e-7, 3e-7, 1e-7, 4e-7, 0.999999],
    ],
}

FIXTURE_NAMES = tuple(_FIXTURES)


def fixture_raw(name: str) -> np.ndarray:
    """The fixture exactly as printed, rows not re-normalized."""
    if name not in _FIXTURES:
        raise UnknownFixture(name, _FIXTURES)
    return np.array(_FIXTURES[name], dtype=float)


def fixture(name: str) -> StochasticMatrix:
    """A published fixture, rows divided by their sums so validation passes."""
    raw = fixture_raw(name)
    return validate_stochastic(raw / raw.sum(axis=1, keepdims=True))


def random_sparse(n: int, a: float, seed: int) -> StochasticMatrix:
    """Sparse irreducible chain: uniform draws thresholded at `a`.

    Construction: uniform(0,1) matrix, entries above `a` zeroed, diagonal
    zeroed, rows normalized. The whole matrix is resampled when a row dies
    or the support is not strongly connected.

    Raises GenerationFailed after 1000 resamples.
    """
    if n < 2:
        raise ParamOutOfRange(f"n must be >= 2, got {n}")
    if not 0.0 < a < 1.0:
        raise ParamOutOfRange(f"threshold a must lie in (0, 1), got {a}")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESAMPLE_ATTEMPTS):
        entries = rng.random((n, n))
        entries[entries > a] = 0.0
        np.fill_diagonal(entries, 0.0)
        sums = entries.sum(axis=1)
        if np.any(sums == 0.0):
            continue
        P = validate_stochastic(entries / sums[:, None])
        if diagnose(P).irreducible:
            return P
    raise GenerationFailed(MAX_RESAMPLE_ATTEMPTS)


def random_walk(n: int) -> StochasticMatrix:
    """Reflecting one-dimensional walk: tridiagonal, 0.75 on the corner
    diagonal, interior rows (0.25, 0.50, 0.25)."""
    if n < 2:
        raise ParamOutOfRange(f"n must be >= 2, got {n}")
    entries = np.zeros((n, n))
    entries[0, 0] = entries[n - 1, n - 1] = 0.75
    entries[0, 1] = entries[n - 1, n - 2] = 0.25
    for i in range(1, n - 1):
        entries[i, i - 1] = entries[i, i + 1] = 0.25
        entries[i, i] = 0.50
    return validate_stochastic(entries)


def two_state(a: float, b: float, require_aperiodic: bool = False) -> StochasticMatrix:
    """The two-state chain [[1-a, a], [b, 1-b]], the closed-form oracle family.

    a = b = 1 gives the period-2 flip chain; pass `require_aperiodic=True`
    to reject it.
    """
    if not (0.0 < a <= 1.0 and 0.0 < b <= 1.0):
        raise ParamOutOfRange(f"need 0 < a <= 1 and 0 < b <= 1, got a={a}, b={b}")
    if require_aperiodic and a == 1.0 and b == 1.0:
        raise ParamOutOfRange("a = b = 1 is the period-2 chain")
    return validate_stochastic([[1.0 - a, a], [b, 1.0 - b]])


def two_state_exact(a: float, b: float) -> np.ndarray:
    """Exact passage times for `two_state(a, b)`:
    [[(a+b)/b, 1/a], [1/b, (a+b)/a]]."""
    return np.array([[(a + b) / b, 1.0 / a], [1.0 / b, (a + b) / a]])


@dataclass(frozen=True)
class GeneratorSpec:
    """A reproducible matrix source: fixture name or parametric family."""

    kind: str  # "fixture" | "random_sparse" | "random_walk" | "two_state"
    name: str | None = None
    n: int | None = None
    a: float | None = None
    b: float | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)

    def build(self) -> StochasticMatrix:
        if self.kind == "fixture":
            return fixture(self.name)
        if self.kind == "random_sparse":
            return random_sparse(self.n, self.a if self.a is not None else 0.4, self.seed)
        if self.kind == "random_walk":
            return random_walk(self.n)
        if self.kind == "two_state":
            return two_state(self.a, self.b)
        raise ParamOutOfRange(f"unknown generator kind {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "fixture":
            return self.name
        if self.kind == "random_sparse":
            return f"random_sparse({self.n},{self.a},seed={self.seed})"
        if self.kind == "random_walk":
            return f"random_walk({self.n})"
        if self.kind == "two_state":
            return f"two_state({self.a},{self.b})"
        return self.kind

    def with_size(self, n: int) -> "GeneratorSpec":
        """Same family at a different size (used by benchmark sweeps)."""
        return GeneratorSpec(kind=self.kind, name=self.name, n=n, a=self.a,
                             b=self.b, seed=self.seed, params=self.params)
