"""Solver Options Dataclasses

Configuration options for the eigensolvers and the benchmark pipeline.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .config import (
    DEFAULT_COARSE_H,
    DEFAULT_MAX_ITER,
    DEFAULT_OVERLAP,
    DEFAULT_SEED,
    DEFAULT_TOL,
    DESK_FINE_SIZES,
    RESIDUAL_TOL,
    SOLVER_NAMES,
)
from .exceptions import InvalidConfigurationError
from .utils import mesh_level

V_STEP_VARIANTS = ("listing", "log_map")


@dataclass
class SolverConfig:
    """Stopping and recording options shared by every solver.

    Attributes:
        tol: Relative tolerance on the eigenvalue gap (ρ − λʰ)/λʰ
        max_iter: Iteration cap; a run that reaches it is reported as not converged
        reference_lambda: Reference eigenvalue λʰ; when None the residual criterion is used

        # Residual Fallback
        residual_tol: Relative tolerance on ‖Ax − ρMx‖_{M⁻¹} / ρ
        record_residuals: If True, residual norms are recorded every iteration

        # RAP Variant
        v_step: "listing" scales the p-direction by (1−α)θ/α, "log_map" uses (1−α)/(1+β)·d(y, v)
    """

    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    reference_lambda: Optional[float] = None

    # Residual Fallback
    residual_tol: float = RESIDUAL_TOL
    record_residuals: bool = False

    # RAP Variant
    v_step: str = "listing"

    def __post_init__(self):
        """Validate configuration options after initialization."""
        if not (self.tol > 0.0):
            raise InvalidConfigurationError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise InvalidConfigurationError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.reference_lambda is not None and not (self.reference_lambda > 0.0):
            raise InvalidConfigurationError(
                f"reference_lambda must be positive, got {self.reference_lambda}"
            )
        if not (self.residual_tol > 0.0):
            raise InvalidConfigurationError(f"residual_tol must be positive, got {self.residual_tol}")
        if self.v_step not in V_STEP_VARIANTS:
            raise InvalidConfigurationError(
                f"v_step must be one of {V_STEP_VARIANTS}, got {self.v_step!r}"
            )

    @property
    def needs_residual(self) -> bool:
        """True if every iteration has to compute the residual norm."""
        return self.record_residuals or self.reference_lambda is None


@dataclass
class BenchSpec:
    """One benchmark sweep over fine mesh sizes.

    Attributes:
        coarse_h: Coarse mesh size H (reciprocal power of two)
        fine_sizes: Fine mesh sizes h, each a reciprocal power of two with h < H
        overlap: Width of the strip shared by neighbouring subdomains, as a fraction of H
        solvers: Solver names to run on every mesh

        # Solver Options
        tol: Relative eigenvalue tolerance
        max_iter: Iteration cap per run
        mu: Optional manual strong-convexity constant for RAP
        ell: Optional manual smoothness constant for RAP

        # Execution
        seed: Seed for every randomized estimate
        max_workers: Threads used to run benchmark cells concurrently
        record_timing: If False, the seconds column is written as 0 so runs are byte-identical
    """

    coarse_h: float = DEFAULT_COARSE_H
    fine_sizes: Tuple[float, ...] = DESK_FINE_SIZES
    overlap: float = DEFAULT_OVERLAP
    solvers: List[str] = field(default_factory=lambda: list(SOLVER_NAMES))

    # Solver Options
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    mu: Optional[float] = None
    ell: Optional[float] = None

    # Execution
    seed: int = DEFAULT_SEED
    max_workers: int = 1
    record_timing: bool = True

    def __post_init__(self):
        """Validate the grid and solver selection."""
        coarse_level = mesh_level(self.coarse_h)
        if not self.fine_sizes:
            raise InvalidConfigurationError("fine_sizes must contain at least one mesh size")
        for h in self.fine_sizes:
            if mesh_level(h) <= coarse_level:
                raise InvalidConfigurationError(f"fine mesh size h={h} must be smaller than H={self.coarse_h}")
        if not (0.0 <= self.overlap <= 1.0):
            raise InvalidConfigurationError(f"overlap must be between 0.0-1.0, got {self.overlap}")
        unknown = [name for name in self.solvers if name not in SOLVER_NAMES]
        if unknown or not self.solvers:
            raise InvalidConfigurationError(
                f"solvers must be a non-empty subset of {SOLVER_NAMES}, got {self.solvers}"
            )
        if (self.mu is None) != (self.ell is None):
            raise InvalidConfigurationError("mu and ell must be given together")
        if self.mu is not None and not (0.0 < self.mu <= self.ell):
            raise InvalidConfigurationError(f"need 0 < mu <= L, got mu={self.mu}, L={self.ell}")
        if self.max_workers < 1:
            raise InvalidConfigurationError(f"max_workers must be at least 1, got {self.max_workers}")
        # Validated by SolverConfig
        self.solver_config()

    def solver_config(self, reference_lambda: Optional[float] = None) -> SolverConfig:
        """Build the per-run solver configuration."""
        return SolverConfig(
            tol=self.tol,
            max_iter=self.max_iter,
            reference_lambda=reference_lambda,
        )
