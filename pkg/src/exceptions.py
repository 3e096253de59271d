"""Custom Exception Hierarchy

Exception hierarchy for the eigensolver library providing granular exception
types for the different failure scenarios of the numerical layers.
"""


class RapError(Exception):
    """Base exception for all library errors.

    This is the root of the exception hierarchy. Catching this exception
    will catch all custom exceptions raised by the package.
    """
    pass


# Validation Errors
class ValidationError(RapError):
    """Raised when input validation fails."""
    pass


class DimensionMismatchError(ValidationError):
    """Raised when operands have incompatible dimensions."""

    def __init__(self, expected: int, actual: int, what: str = "vector"):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Dimension mismatch for {what}: expected {expected}, got {actual}"
        )


class InvalidConfigurationError(ValidationError, ValueError):
    """Raised when configuration parameters are invalid."""
    pass


class InvalidFileError(ValidationError):
    """Raised when an input file is missing or has the wrong format."""
    pass


class DomainError(ValidationError):
    """Raised when an argument lies outside the domain of an operation
    (zero vector, non-SPD coefficient, violated eigenvalue window)."""
    pass


class DenseSizeLimitExceededError(ValidationError):
    """Raised when a dense computation is requested on a too large problem."""

    def __init__(self, size: int, max_size: int):
        self.size = size
        self.max_size = max_size
        super().__init__(
            f"Dimension {size} exceeds the dense limit {max_size}"
        )


# Linear Algebra Errors
class LinearAlgebraError(RapError):
    """Base class for matrix-level failures."""
    pass


class MatrixError(LinearAlgebraError):
    """Raised when a matrix is not symmetric positive definite."""
    pass


class DegenerateBasisError(LinearAlgebraError):
    """Raised when every Rayleigh-Ritz basis vector is numerically zero."""
    pass


# Geometry Errors
class GeometryError(RapError):
    """Raised when a sphere operation is undefined for its inputs."""
    pass


class ConsistencyError(GeometryError):
    """Raised when a paired vector loses ⟨x, x̂⟩ > 0 (corrupted co-iterate)."""

    def __init__(self, inner: float):
        self.inner = inner
        super().__init__(
            f"Paired vector lost positive B-norm: <x, xhat> = {inner:.3e}"
        )


# Preconditioner Errors
class PreconditionerError(RapError):
    """Base class for preconditioner errors."""
    pass


class PreconditionerStateError(PreconditionerError):
    """Raised when a decomposition is applied before it is factorized."""
    pass


class SubdomainConstructionError(PreconditionerError):
    """Raised when a subdomain is empty after clipping to the domain."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"Subdomain {index} is empty after clipping to the domain")


class MissingDependencyError(PreconditionerError):
    """Raised when an optional factorization backend is requested but missing."""

    def __init__(self, missing_packages: list):
        self.missing_packages = missing_packages
        super().__init__(
            f"Missing required packages: {', '.join(missing_packages)}. "
            f"Install with: pip install {' '.join(missing_packages)}"
        )


# Solver Errors
class SolverError(RapError):
    """Base class for eigensolver errors."""
    pass


class CoefficientError(SolverError):
    """Raised when the closed-form acceleration coefficients are invalid."""

    def __init__(self, kappa: float):
        self.kappa = kappa
        super().__init__(
            f"Condition number kappa = L/mu = {kappa:.4g} is below 9; "
            f"the closed-form coefficients need kappa >= 9"
        )


class NumericalBreakdownError(SolverError):
    """Raised when a solver loses B-consistency of its iterates.

    Carries the last valid iterate and the history recorded so far.
    """

    def __init__(self, iteration: int, reason: str, last_iterate=None, history=None):
        self.iteration = iteration
        self.last_iterate = last_iterate
        self.history = history
        super().__init__(f"Numerical breakdown at iteration {iteration}: {reason}")


# Diagnostics Errors
class DiagnosticsError(RapError):
    """Base class for diagnostics errors."""
    pass


class EstimationError(DiagnosticsError):
    """Raised when a sampling estimator finds no admissible sample."""
    pass


# Pipeline Errors
class PipelineError(RapError):
    """Base class for benchmark orchestration errors."""
    pass


class PipelineStepError(PipelineError):
    """Raised when a specific benchmark step fails.

    This wraps the underlying exception while preserving the step context.
    """

    def __init__(self, step_name: str, original_exception: Exception):
        self.step_name = step_name
        self.original_exception = original_exception
        super().__init__(
            f"Benchmark step '{step_name}' failed: {str(original_exception)}"
        )


class ReferenceMismatchError(PipelineError):
    """Raised when two reference eigenvalue computations disagree."""

    def __init__(self, first: float, second: float, tol: float):
        self.first = first
        self.second = second
        self.tol = tol
        super().__init__(
            f"Reference eigenvalues disagree: {first:.15g} vs {second:.15g} "
            f"(relative tolerance {tol:.1e})"
        )
