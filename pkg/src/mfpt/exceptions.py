"""Exception and warning types shared across the package."""


class MfptError(Exception):
    """Base class for all errors raised by this package."""


class NotSquare(MfptError):
    def __init__(self, shape):
        self.shape = tuple(shape)
        super().__init__(f"expected a square matrix, got shape {self.shape}")


class NegativeEntry(MfptError):
    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"negative entry {value!r} at ({i}, {j})")


class RowSumViolation(MfptError):
    def __init__(self, i, row_sum):
        self.i, self.row_sum = i, row_sum
        super().__init__(f"row {i} sums to {row_sum!r}, not 1")


class SingularSystem(MfptError):
    """The chain is numerically reducible; the linear system has no usable solution."""


class IndexOutOfRange(MfptError):
    def __init__(self, index, n):
        self.index, self.n = index, n
        super().__init__(f"state index {index} out of range for n={n}")


class NotErgodic(MfptError):
    def __init__(self, diagnosis):
        self.diagnosis = diagnosis
        super().__init__(
            f"chain is not ergodic (irreducible={diagnosis.irreducible}, "
            f"period={diagnosis.period})"
        )


class IncompatibleSystem(MfptError):
    """Least-squares residual too large for a system that should be compatible.

    Passage-time column systems are compatible by construction, so hitting
    this signals a bug upstream, not bad input.
    """

    def __init__(self, residual_norm):
        self.residual_norm = residual_norm
        super().__init__(f"system incompatible: residual norm {residual_norm:.3e}")


class SingularPivot(MfptError):
    def __init__(self, k, magnitude=0.0):
        self.k, self.magnitude = k, magnitude
        super().__init__(f"pivot {k} has magnitude {magnitude:.3e}; matrix is singular")


class MaxIterExceeded(MfptError):
    def __init__(self, iterations, delta):
        self.iterations, self.delta = iterations, delta
        super().__init__(
            f"no convergence after {iterations} iterations (last delta {delta:.3e})"
        )


class AlphaOutOfRange(MfptError):
    def __init__(self, alpha):
        self.alpha = alpha
        super().__init__(f"alpha must satisfy 0 <= alpha < 1, got {alpha!r}")


class UnknownFixture(MfptError):
    def __init__(self, name, known):
        self.name, self.known = name, tuple(known)
        super().__init__(f"unknown fixture {name!r}; known: {', '.join(self.known)}")


class GenerationFailed(MfptError):
    def __init__(self, attempts):
        self.attempts = attempts
        super().__init__(f"no irreducible matrix found after {attempts} attempts")


class ParamOutOfRange(MfptError):
    pass


class DimensionMismatch(MfptError):
    def __init__(self, expected, got):
        self.expected, self.got = tuple(expected), tuple(got)
        super().__init__(f"dimension mismatch: expected {self.expected}, got {self.got}")


class MatrixFormatError(MfptError):
    """Malformed dense-txt matrix file."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ConditionWarning(UserWarning):
    """Pivot decay ratio indicates an ill-conditioned column system."""
