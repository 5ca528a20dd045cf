"""Exception hierarchy shared across the package."""


class CausalForgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGraph(CausalForgeError):
    """Adjacency matrix violates a structural invariant (shape, diagonal, values)."""


class NotADag(CausalForgeError):
    """A DAG was required but the graph contains a directed cycle."""


class InvalidConfig(CausalForgeError):
    """A configuration object violates its invariants."""


class NumericError(CausalForgeError):
    """Numerical failure (non-finite values, solver breakdown).

    May carry ``last_x``, the last finite iterate seen before the failure.
    """

    def __init__(self, message, last_x=None):
        super().__init__(message)
        self.last_x = last_x


class SingularCovariance(CausalForgeError):
    """Covariance submatrix is singular where an inverse is needed."""


class SingularDesign(CausalForgeError):
    """Regression design matrix is rank deficient."""


class InsufficientSamples(CausalForgeError):
    """Too few samples for the requested statistical test."""


class SimulationOverflow(CausalForgeError):
    """SCM simulation produced non-finite values."""


class DegenerateVariable(CausalForgeError):
    """A variable has zero variance where standardization is required."""


class PriorConflict(CausalForgeError):
    """Prior knowledge is self-contradictory or cannot be satisfied."""


class FormatError(CausalForgeError):
    """Malformed input file. Carries the offending line (and column) when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ShapeError(CausalForgeError):
    """Matrix dimensions do not match."""


class StageError(CausalForgeError):
    """A pipeline stage failed; wraps the original error with the stage name."""

    def __init__(self, stage, cause, partial=None):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.partial = partial
