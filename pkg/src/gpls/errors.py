"""Exception taxonomy shared across the package.

The split mirrors the three kinds of failure a caller can act on: bad
arguments (DomainError), unreadable input files (DataFormatError), and
numerical breakdowns of an otherwise valid computation (NumericalError and
its subclasses). The command-line layer maps these onto exit codes.
"""


class GplsError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GplsError, ValueError):
    """An argument violates a documented precondition."""


class DataFormatError(GplsError, ValueError):
    """An input file could not be parsed in any supported format."""


class UnsupportedOracleError(DomainError):
    """No ground-truth curvature oracle exists for the requested surface."""


class NumericalError(GplsError, RuntimeError):
    """A computation failed numerically (non-convergence, bad rank, ...)."""


class NoVarietyError(NumericalError):
    """The point set is unisolvent: no nonzero polynomial in the chosen
    space vanishes on it, so there is no level set to extract."""


class CorankError(NumericalError):
    """More than one independent polynomial vanishes on the points, so a
    single level-set polynomial is ambiguous."""

    def __init__(self, corank, message=None):
        self.corank = corank
        super().__init__(message or f"kernel is {corank}-dimensional, expected exactly 1")


class ConvergenceError(NumericalError):
    """An iteration did not reach its tolerance within the step budget."""

    def __init__(self, message, last_point=None, residual=None):
        super().__init__(message)
        self.last_point = last_point
        self.residual = residual


class DegenerateGradientError(NumericalError):
    """The level-set gradient vanished where a normal direction was needed."""


class SamplingError(NumericalError):
    """Rejection sampling failed to produce enough surface points."""
