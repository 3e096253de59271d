"""Configuration Constants

Constants for the eigensolver, preconditioner, diagnostics and benchmark layers.
"""

# Solver stopping (ρ − λʰ ≤ tol·λʰ, or the iteration cap)
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 20000
RESIDUAL_TOL = 1e-8  # fallback criterion when no reference eigenvalue is known
MONOTONE_SLACK = 1e-13  # relative slack allowed on Rayleigh-quotient increases

# Linear algebra tolerances
QR_DROP_TOL = 1e-12  # relative to the largest basis column norm
SYMMETRY_TOL = 1e-12
DENSE_ORACLE_MAX_DIM = 5000
DIAGNOSTICS_MAX_DIM = 2000

# Sphere geometry
SPHERE_TOL = 1e-12
EXP_SMALL_NORM = 1e-14
B_ORTHONORMAL_TOL = 1e-8
B_NORMALIZED_TOL = 1e-10

# RAP / LORAG
DEGENERATE_DIRECTION_TOL = 1e-14
KAPPA_FLOOR = 9.0  # closed-form coefficients require κ ≥ 9
PARAMETER_LANCZOS_ITERS = 10
COARSE_EIGEN_TOL = 1e-12

# Diagnostics sampling
SAMPLING_RADII = 16
SAMPLING_DIRECTIONS = 64
DEFAULT_SEED = 42
ESTIMATE_SLACK = 1e-8
SAMPLE_BOUNDARY_SHRINK = 1e-9  # outermost radius stays strictly inside {f ≤ ρ*}
DIAGNOSTICS_LANCZOS_ITERS = 40
EPIC_SLACK = 1e-10
HESSIAN_FD_STEP = 1e-4
DIAGNOSE_LEVEL = 0.25  # ρ* = λ₁ + level·(λ₂ − λ₁) for the diagnose command

# Benchmark grid
DEFAULT_COARSE_H = 2.0 ** -2
DEFAULT_OVERLAP = 0.5  # width of the strip shared by neighbouring subdomains, in units of H
DESK_FINE_SIZES = tuple(2.0 ** -k for k in range(3, 8))
EXTENDED_FINE_SIZES = tuple(2.0 ** -k for k in range(8, 11))
DENSE_REFERENCE_MAX_DIM = 1000
REFERENCE_TOL = 1e-13
REFERENCE_AGREEMENT_TOL = 1e-11
NOT_CONVERGED_MARK = "×"
FAILED_MARK = "fail"

# Progress fractions reported by the benchmark pipeline
PROGRESS_STEPS = {
    "START": 0.0,
    "SETUP_END": 0.3,  # meshes, preconditioners and reference eigenvalues
    "COMPLETE": 1.0,
}

# Names accepted on the command line
SOLVER_NAMES = ("rap", "psd", "ra", "sd")
PRECONDITIONER_NAMES = ("none", "jacobi", "schwarz2")
OUTPUT_FORMATS = ("table", "csv")
REPORT_FORMATS = ("csv", "jsonl")

# Output schemas
HISTORY_COLUMNS = ["iter", "rayleigh", "gap", "residual", "elapsed_ms"]
BENCH_COLUMNS = ["solver", "h", "H", "overlap", "iters", "converged", "lambda", "gap", "seconds"]

# Environment variables read by app.py (through python-dotenv)
ENV_LOG_LEVEL = "RAP_LOG_LEVEL"
ENV_MAX_WORKERS = "RAP_MAX_WORKERS"
ENV_SEED = "RAP_SEED"
