"""Smallest-Eigenpair Solver - Command Line

Benchmark, solve, diagnose and mesh-export commands for the preconditioned
Riemannian acceleration eigensolver.
"""
import sys
import os

# Add current directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import argparse
import logging
from typing import List, Optional, Tuple

import numpy as np
from dotenv import load_dotenv
from tqdm import tqdm

# Load environment variables
load_dotenv()

from src.config import (
    DEFAULT_COARSE_H,
    DEFAULT_MAX_ITER,
    DEFAULT_OVERLAP,
    DEFAULT_SEED,
    DEFAULT_TOL,
    DESK_FINE_SIZES,
    DIAGNOSE_LEVEL,
    ENV_LOG_LEVEL,
    ENV_MAX_WORKERS,
    ENV_SEED,
    EXTENDED_FINE_SIZES,
    OUTPUT_FORMATS,
    PRECONDITIONER_NAMES,
    REPORT_FORMATS,
    RESIDUAL_TOL,
    SAMPLING_DIRECTIONS,
    SOLVER_NAMES,
)
from src.diagnostics import (
    DenseProblem,
    convexity_constants,
    diagnostics_frame,
    diagnostics_row,
    estimate_precon_quality,
    schwarz_parameters,
    write_report,
)
from src.exceptions import InvalidConfigurationError, RapError, ValidationError
from src.fem import MeshHierarchy, assemble_laplacian_p1, build_mesh_hierarchy
from src.linalg import (
    MatrixPencil,
    dense_generalized_eig,
    read_spd_matrix,
    read_vector,
    write_sparse_matrix,
    write_spd_matrix,
)
from src.pipeline import BenchmarkPipeline
from src.precond import (
    PreconditionerHandle,
    assemble_explicit_b,
    build_two_level_overlapping,
    coarse_eigen_initial,
    coarse_smallest_eigenvector,
    galerkin_coarse_pencil,
    identity_preconditioner,
    jacobi_preconditioner,
    schwarz_preconditioner,
)
from src.solve_result import SolveResult
from src.solver_options import BenchSpec, SolverConfig
from src.solvers import initial_state, psd_solve, ra_solve, rap_solve, sd_solve, select_parameters
from src.utils import format_seconds, parse_mesh_size, parse_mesh_sizes

logger = logging.getLogger("app")


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError as e:
        raise InvalidConfigurationError(f"{name} must be an integer, got {value!r}") from e


def _solver_list(text: str) -> List[str]:
    names = [part.strip().lower() for part in text.split(",") if part.strip()]
    unknown = [name for name in names if name not in SOLVER_NAMES]
    if unknown or not names:
        raise argparse.ArgumentTypeError(f"solvers must be a comma separated subset of {','.join(SOLVER_NAMES)}")
    return names


def _mesh_size(text: str) -> float:
    try:
        return parse_mesh_size(text)
    except ValidationError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _mesh_sizes(text: str) -> Tuple[float, ...]:
    try:
        return parse_mesh_sizes(text)
    except ValidationError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    """Command-line interface with the bench, solve, diagnose and mesh subcommands."""
    parser = argparse.ArgumentParser(
        prog="app.py",
        description="Smallest eigenpair of SPD pencils with preconditioned Riemannian acceleration",
    )
    parser.add_argument("--log-level", default=os.getenv(ENV_LOG_LEVEL, "WARNING"),
                        help=f"Logging level (default from {ENV_LOG_LEVEL}, else WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mesh_flags(p: argparse.ArgumentParser, fine_default: Optional[float]) -> None:
        p.add_argument("--H", dest="coarse_h", type=_mesh_size, default=DEFAULT_COARSE_H,
                       help="Coarse mesh size, e.g. 0.25, 1/4 or 2^-2")
        p.add_argument("--h", dest="fine_h", type=_mesh_size, default=fine_default, help="Fine mesh size")
        p.add_argument("--overlap", type=float, default=DEFAULT_OVERLAP,
                       help="Overlap width between neighbouring subdomains as a fraction of H")

    def add_solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=None, help="Stopping tolerance")
        p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="Iteration cap")
        p.add_argument("--mu", type=float, default=None, help="Manual strong-convexity constant (with --L)")
        p.add_argument("--L", dest="ell", type=float, default=None, help="Manual smoothness constant (with --mu)")
        p.add_argument("--seed", type=int, default=_env_int(ENV_SEED, DEFAULT_SEED), help="Seed of randomized estimates")

    bench = sub.add_parser("bench", help="Iteration counts over a grid of fine meshes")
    bench.add_argument("--H", dest="coarse_h", type=_mesh_size, default=DEFAULT_COARSE_H, help="Coarse mesh size")
    bench.add_argument("--h", dest="fine_sizes", type=_mesh_sizes, default=None,
                       help="Comma separated fine mesh sizes (default 2^-3..2^-7)")
    bench.add_argument("--extended", action="store_true", help="Append h = 2^-8..2^-10 to the grid")
    bench.add_argument("--overlap", type=float, default=DEFAULT_OVERLAP,
                       help="Overlap width between neighbouring subdomains as a fraction of H")
    bench.add_argument("--solver", type=_solver_list, default=list(SOLVER_NAMES), help="Comma separated solvers")
    add_solver_flags(bench)
    bench.add_argument("--workers", type=int, default=_env_int(ENV_MAX_WORKERS, 1),
                       help=f"Concurrent benchmark cells (default from {ENV_MAX_WORKERS}, else 1)")
    bench.add_argument("--no-timing", action="store_true", help="Write 0 seconds so repeated runs are byte-identical")
    bench.add_argument("--format", choices=OUTPUT_FORMATS, default="table", help="Standard output format")
    bench.add_argument("--out", default=None, help="CSV output path")
    bench.add_argument("--no-progress", action="store_true", help="Disable the progress bar")

    solve = sub.add_parser("solve", help="Solve one pencil from Matrix Market files or an assembled mesh")
    solve.add_argument("--A", dest="a_path", default=None, help="Stiffness matrix (.mtx)")
    solve.add_argument("--M", dest="m_path", default=None, help="Mass matrix (.mtx)")
    solve.add_argument("--x0", dest="x0_path", default=None, help="Start vector, one value per line")
    add_mesh_flags(solve, None)
    solve.add_argument("--solver", choices=SOLVER_NAMES, default="rap", help="Solver")
    solve.add_argument("--pc", choices=PRECONDITIONER_NAMES, default="none", help="Preconditioner for rap/psd")
    add_solver_flags(solve)
    solve.add_argument("--reference", action="store_true",
                       help="Stop on the eigenvalue gap against the dense oracle instead of the residual")
    solve.add_argument("--out", default=None, help="Convergence history CSV path")

    diagnose = sub.add_parser("diagnose", help="Preconditioner quality report for a small mesh")
    add_mesh_flags(diagnose, 2.0 ** -3)
    diagnose.add_argument("--pc", choices=PRECONDITIONER_NAMES, default="schwarz2", help="Preconditioner")
    diagnose.add_argument("--level", type=float, default=DIAGNOSE_LEVEL,
                          help="Sublevel ρ* = λ₁ + level·(λ₂ − λ₁), level in [0, 0.5)")
    diagnose.add_argument("--samples", type=int, default=SAMPLING_DIRECTIONS, help="Sampled directions per radius")
    diagnose.add_argument("--seed", type=int, default=_env_int(ENV_SEED, DEFAULT_SEED), help="Sampling seed")
    diagnose.add_argument("--format", choices=REPORT_FORMATS, default="csv", help="Report format")
    diagnose.add_argument("--out", default=None, help="Report output path")

    mesh = sub.add_parser("mesh", help="Export the assembled pencil as Matrix Market files")
    add_mesh_flags(mesh, 2.0 ** -3)
    mesh.add_argument("--out", default=".", help="Output directory for A.mtx, M.mtx and P.mtx")
    return parser


def build_preconditioner(
    name: str,
    p: MatrixPencil,
    hierarchy: Optional[MeshHierarchy] = None,
    overlap: float = DEFAULT_OVERLAP,
) -> PreconditionerHandle:
    """
    Preconditioner handle by command-line name.

    Raises:
        ValidationError: If schwarz2 is requested without a mesh
    """
    if name == "none":
        return identity_preconditioner(p.n)
    if name == "jacobi":
        return jacobi_preconditioner(p.a)
    if hierarchy is None:
        raise ValidationError("--pc schwarz2 needs a mesh: pass --h (and --H) matching the matrices")
    return schwarz_preconditioner(build_two_level_overlapping(hierarchy, overlap, p.a))


def _mesh_pencil(coarse_h: float, fine_h: float) -> Tuple[MeshHierarchy, MatrixPencil]:
    hierarchy = build_mesh_hierarchy(coarse_h, fine_h)
    return hierarchy, assemble_laplacian_p1(hierarchy.fine)


def cmd_bench(args) -> int:
    if args.tol is not None and not (args.tol > 0.0):
        raise InvalidConfigurationError(f"--tol must be positive, got {args.tol}")
    sizes = tuple(args.fine_sizes or DESK_FINE_SIZES)
    if args.extended:
        sizes = sizes + tuple(h for h in EXTENDED_FINE_SIZES if h not in sizes)
    spec = BenchSpec(
        coarse_h=args.coarse_h,
        fine_sizes=sizes,
        overlap=args.overlap,
        solvers=args.solver,
        tol=DEFAULT_TOL if args.tol is None else args.tol,
        max_iter=args.max_iter,
        mu=args.mu,
        ell=args.ell,
        seed=args.seed,
        max_workers=args.workers,
        record_timing=not args.no_timing,
    )

    with tqdm(total=100, desc="bench", disable=args.no_progress, leave=False, file=sys.stderr) as bar:
        def progress(fraction: float, desc: str) -> None:
            bar.set_postfix_str(desc)
            bar.update(int(round(100 * fraction)) - bar.n)

        result = BenchmarkPipeline(spec, progress).run()

    if args.out:
        result.to_csv(args.out)
    if args.format == "csv":
        sys.stdout.write(result.to_csv())
    else:
        sys.stdout.write(result.format_table())
    for cell in result.failed_cells:
        print(f"warning: {cell.solver} h={cell.h:g}: {cell.error}", file=sys.stderr)
    return 0


def _load_pencil(args) -> Tuple[MatrixPencil, Optional[MeshHierarchy]]:
    hierarchy = None
    if args.a_path or args.m_path:
        if not (args.a_path and args.m_path):
            raise ValidationError("--A and --M must be given together")
        p = MatrixPencil(read_spd_matrix(args.a_path), read_spd_matrix(args.m_path))
        if args.fine_h is not None:
            hierarchy = build_mesh_hierarchy(args.coarse_h, args.fine_h)
            if hierarchy.fine.n_interior != p.n:
                raise ValidationError(
                    f"--h {args.fine_h:g} gives {hierarchy.fine.n_interior} unknowns, the matrices have {p.n}"
                )
        return p, hierarchy
    if args.fine_h is None:
        raise ValidationError("solve needs --A/--M or a mesh size --h")
    hierarchy, p = _mesh_pencil(args.coarse_h, args.fine_h)
    return p, hierarchy


def run_solve(args) -> SolveResult:
    """Run the solve command and return its result."""
    p, hierarchy = _load_pencil(args)
    reference = None
    if args.reference:
        reference = float(dense_generalized_eig(p)[0][0])
    if reference is not None:
        cfg = SolverConfig(tol=args.tol or DEFAULT_TOL, max_iter=args.max_iter, reference_lambda=reference)
    else:
        cfg = SolverConfig(max_iter=args.max_iter, residual_tol=args.tol or RESIDUAL_TOL)

    coarse_pencil = None
    start = None
    if hierarchy is not None and hierarchy.has_coarse_space:
        coarse_pencil = galerkin_coarse_pencil(hierarchy, p)
        start = hierarchy.interp @ coarse_smallest_eigenvector(coarse_pencil)
    if args.x0_path:
        start = read_vector(args.x0_path, p.n)
    if start is None:
        start = np.random.default_rng(args.seed).standard_normal(p.n)

    if args.solver == "ra":
        return ra_solve(p, start, cfg)
    if args.solver == "sd":
        return sd_solve(p, start, cfg)

    pc = build_preconditioner(args.pc, p, hierarchy, args.overlap)
    if args.pc == "schwarz2" and coarse_pencil is not None and not args.x0_path:
        x0 = coarse_eigen_initial(hierarchy, coarse_pencil, pc)
    else:
        x0 = initial_state(start, pc, p.n).x
    if args.solver == "psd":
        return psd_solve(p, pc, x0.xhat, cfg)
    choice = select_parameters(p, pc, x0, coarse_pencil, mu=args.mu, ell=args.ell, seed=args.seed)
    return rap_solve(p, pc, choice.coefficients(), x0.xhat, cfg)


def cmd_solve(args) -> int:
    result = run_solve(args)
    lam, _, history = result
    print(f"lambda = {lam:.15g}")
    print(f"iterations = {history.iterations}")
    print(f"converged = {history.converged} ({history.stop_reason})")
    print(f"time = {format_seconds(history.wall_time)}")
    if args.out:
        history.to_csv(args.out)
    return 0 if result.is_converged else 1


def cmd_diagnose(args) -> int:
    if not (0.0 <= args.level < 0.5):
        raise InvalidConfigurationError(f"--level must lie in [0, 0.5), got {args.level}")
    hierarchy, p = _mesh_pencil(args.coarse_h, args.fine_h)
    decomposition = None
    if args.pc == "schwarz2":
        decomposition = build_two_level_overlapping(hierarchy, args.overlap, p.a)
        pc = schwarz_preconditioner(decomposition)
    else:
        pc = build_preconditioner(args.pc, p)
    problem = DenseProblem(p.a, p.m, assemble_explicit_b(pc))
    lam1, lam2, lamn = problem.lambda1, problem.lambda2, problem.lambdan
    rho_star = lam1 + args.level * (lam2 - lam1)

    quality = estimate_precon_quality(
        problem.a, problem.m, problem.b, rho_star, samples=args.samples, seed=args.seed, problem=problem
    )
    constants = convexity_constants(quality, lam1, lam2, lamn, rho_star)
    extra = {"h": args.fine_h, "H": args.coarse_h, "overlap": args.overlap, "pc": args.pc, "n": p.n}
    if decomposition is not None:
        params = schwarz_parameters(decomposition, p, hierarchy, problem)
        extra.update({f"schwarz_{key}": value for key, value in params.to_dict().items()})
    frame = diagnostics_frame([diagnostics_row(quality, constants, extra)])
    text = write_report(frame, args.out, args.format)
    if not args.out:
        sys.stdout.write(text)
    return 0


def cmd_mesh(args) -> int:
    hierarchy, p = _mesh_pencil(args.coarse_h, args.fine_h)
    os.makedirs(args.out, exist_ok=True)
    label = f"P1 Laplacian, h={args.fine_h:g}, H={args.coarse_h:g}"
    write_spd_matrix(os.path.join(args.out, "A.mtx"), p.a, comment=f"stiffness, {label}")
    write_spd_matrix(os.path.join(args.out, "M.mtx"), p.m, comment=f"mass, {label}")
    write_sparse_matrix(os.path.join(args.out, "P.mtx"), hierarchy.interp, comment=f"coarse interpolation, {label}")
    print(f"Wrote A.mtx, M.mtx, P.mtx (n={p.n}, n_coarse={hierarchy.coarse.n_interior}) to {args.out}")
    return 0


COMMANDS = {
    "bench": cmd_bench,
    "solve": cmd_solve,
    "diagnose": cmd_diagnose,
    "mesh": cmd_mesh,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, configure logging and run one subcommand.

    Returns:
        Exit status: 0 on success, 1 if a solve did not converge, 2 on errors
    """
    try:
        parser = build_parser()
    except RapError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    level = getattr(logging, str(args.log_level).upper(), None)
    if not isinstance(level, int):
        parser.error(f"unknown log level {args.log_level!r}")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args)
    except RapError as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
