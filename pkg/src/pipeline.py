"""Benchmark Pipeline

Orchestration of the iteration-count benchmark over a grid of fine meshes.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse.linalg as spla

from .config import DENSE_REFERENCE_MAX_DIM, PROGRESS_STEPS, REFERENCE_AGREEMENT_TOL, REFERENCE_TOL
from .exceptions import PipelineStepError, ReferenceMismatchError
from .fem import MeshHierarchy, assemble_laplacian_p1, build_mesh_hierarchy
from .linalg.oracle import dense_generalized_eig
from .linalg.pencil import DenseVector, MatrixPencil
from .manifold.paired import PairedVector
from .precond import (
    PreconditionerHandle,
    build_two_level_overlapping,
    coarse_eigen_initial,
    coarse_smallest_eigenvector,
    galerkin_coarse_pencil,
    get_missing_dependencies,
    schwarz_preconditioner,
)
from .solve_result import BenchCell, BenchmarkResult, SolveResult
from .solver_options import BenchSpec, SolverConfig
from .solvers import SpectrumEstimate, estimate_spectrum, psd_solve, ra_solve, rap_solve, sd_solve, select_parameters
from .utils import format_mesh_size

logger = logging.getLogger(__name__)

PRECONDITIONED_SOLVERS = ("rap", "psd")


@dataclass
class MeshSetup:
    """Everything the solvers of one fine mesh share (read-only once built).

    Attributes:
        h: Fine mesh size
        hierarchy: Coarse/fine mesh pair
        pencil: Assembled (A, M)
        coarse_pencil: Galerkin restriction of the pencil
        start: Coarse eigenvector prolongated to the fine mesh, R₀ᵀu₀
        reference_lambda: Trusted λʰ
        spectrum: λ₁, λ₂, λ_n estimates for the M-sphere baselines

        # Preconditioned Solvers
        pc: Two-level Schwarz preconditioner
        x0: Coarse-space start point B⁻¹R₀ᵀu₀, B-normalized
    """

    h: float
    hierarchy: MeshHierarchy
    pencil: MatrixPencil
    coarse_pencil: MatrixPencil
    start: DenseVector
    reference_lambda: float
    spectrum: SpectrumEstimate

    # Preconditioned Solvers
    pc: Optional[PreconditionerHandle] = None
    x0: Optional[PairedVector] = None


class BenchmarkPipeline:
    """Benchmark orchestrator.

    For every fine mesh size of the BenchSpec:
    1. Setup - mesh pair, P1 pencil, Galerkin coarse pencil and coarse start
    2. Preconditioner - two-level overlapping Schwarz (for RAP/PSD and the long reference run)
    3. Reference - λʰ from the dense oracle, or a long PSD run cross-checked by Lanczos
    4. Cells - every requested solver from the coarse start, in a bounded worker pool

    A failing mesh or cell never aborts the sweep; it is recorded with the
    failure marker and the remaining cells still run.

    Attributes:
        spec: Benchmark specification
        progress_callback: Optional callback for progress updates (progress, desc)
    """

    def __init__(self, spec: BenchSpec, progress_callback: Optional[Callable[[float, str], None]] = None):
        self.spec = spec
        self.progress = progress_callback or (lambda p, d: None)

    def run(self) -> BenchmarkResult:
        """
        Execute the whole sweep.

        Returns:
            BenchmarkResult with one cell per (solver, h), solver-major

        Raises:
            Does not raise - per-mesh and per-cell errors are captured in the cells
        """
        spec = self.spec
        missing = get_missing_dependencies()
        if missing:
            logger.info("Optional packages not installed (%s); subdomain solves use SuperLU", ", ".join(missing))
        self.progress(PROGRESS_STEPS["START"], "Assembling meshes...")
        setups: Dict[float, MeshSetup] = {}
        setup_errors: Dict[float, PipelineStepError] = {}

        with ThreadPoolExecutor(max_workers=spec.max_workers) as pool:
            outcomes = list(pool.map(self._setup_or_error, spec.fine_sizes))
        for h, outcome in zip(spec.fine_sizes, outcomes):
            if isinstance(outcome, PipelineStepError):
                setup_errors[h] = outcome
            else:
                setups[h] = outcome
        self.progress(PROGRESS_STEPS["SETUP_END"], f"Prepared {len(setups)}/{len(spec.fine_sizes)} meshes")

        jobs = [(solver, h) for solver in spec.solvers for h in spec.fine_sizes]
        cells: List[BenchCell] = []
        done = 0
        with ThreadPoolExecutor(max_workers=spec.max_workers) as pool:
            futures = [pool.submit(self._run_job, solver, h, setups.get(h), setup_errors.get(h)) for solver, h in jobs]
            for future in futures:
                cells.append(future.result())
                done += 1
                span = PROGRESS_STEPS["COMPLETE"] - PROGRESS_STEPS["SETUP_END"]
                self.progress(PROGRESS_STEPS["SETUP_END"] + span * done / len(jobs), f"Finished {done}/{len(jobs)} runs")

        result = BenchmarkResult(
            cells=cells,
            references={h: s.reference_lambda for h, s in setups.items()},
        )
        for cell in result.failed_cells:
            logger.warning("Cell %s h=%s failed: %s", cell.solver, format_mesh_size(cell.h), cell.error)
        self.progress(PROGRESS_STEPS["COMPLETE"], "Complete!")
        return result

    def _setup_or_error(self, h: float):
        try:
            return self.setup_mesh(h)
        except Exception as e:
            logger.warning("Setup for h=%s failed: %s", format_mesh_size(h), e)
            return PipelineStepError(f"setup h={format_mesh_size(h)}", e)

    def setup_mesh(self, h: float) -> MeshSetup:
        """
        Assemble one fine mesh and compute its reference eigenvalue.

        Raises:
            ReferenceMismatchError: If the two reference computations disagree
        """
        spec = self.spec
        hierarchy = build_mesh_hierarchy(spec.coarse_h, h)
        pencil = assemble_laplacian_p1(hierarchy.fine)
        coarse_pencil = galerkin_coarse_pencil(hierarchy, pencil)
        start = hierarchy.interp @ coarse_smallest_eigenvector(coarse_pencil)

        pc = x0 = None
        needs_pc = any(name in PRECONDITIONED_SOLVERS for name in spec.solvers)
        if needs_pc or pencil.n > DENSE_REFERENCE_MAX_DIM:
            decomposition = build_two_level_overlapping(hierarchy, spec.overlap, pencil.a)
            pc = schwarz_preconditioner(decomposition)
            x0 = coarse_eigen_initial(hierarchy, coarse_pencil, pc)

        reference_lambda, spectrum = self.reference_eigenvalue(pencil, coarse_pencil, pc, x0)
        logger.info("h=%s: n=%d, lambda_h=%.15g", format_mesh_size(h), pencil.n, reference_lambda)
        return MeshSetup(
            h=h,
            hierarchy=hierarchy,
            pencil=pencil,
            coarse_pencil=coarse_pencil,
            start=start,
            reference_lambda=reference_lambda,
            spectrum=spectrum,
            pc=pc,
            x0=x0,
        )

    def reference_eigenvalue(
        self,
        p: MatrixPencil,
        coarse_pencil: MatrixPencil,
        pc: Optional[PreconditionerHandle] = None,
        x0: Optional[PairedVector] = None,
    ) -> Tuple[float, SpectrumEstimate]:
        """
        Trusted λʰ and spectrum estimate of one fine pencil.

        Dense oracle up to DENSE_REFERENCE_MAX_DIM. Above it, PSD with pc from x0
        run to the residual tolerance REFERENCE_TOL, cross-checked by
        scipy.sparse.linalg.eigsh in generalized mode without shift-invert.
        """
        if p.n <= DENSE_REFERENCE_MAX_DIM:
            values, _ = dense_generalized_eig(p)
            return float(values[0]), SpectrumEstimate(float(values[0]), float(values[1]), float(values[-1]))

        cfg = SolverConfig(max_iter=self.spec.max_iter, residual_tol=REFERENCE_TOL)
        long_run = psd_solve(p, pc, x0.xhat, cfg, solver_name="reference")
        if not long_run.is_converged:
            logger.warning(
                "Reference run stopped at the iteration cap (n=%d, rho=%.15g)", p.n, long_run.eigenvalue
            )
        first = long_run.eigenvalue
        second = lanczos_reference(p, long_run.x.x)
        if second is not None and abs(first - second) > REFERENCE_AGREEMENT_TOL * abs(second):
            raise ReferenceMismatchError(first, second, REFERENCE_AGREEMENT_TOL)
        reference = first if second is None else min(first, second)
        spectrum = estimate_spectrum(p, coarse_pencil, self.spec.seed)
        return reference, SpectrumEstimate(reference, spectrum.lambda2, spectrum.lambdan)

    def _run_job(
        self,
        solver: str,
        h: float,
        setup: Optional[MeshSetup],
        setup_error: Optional[PipelineStepError],
    ) -> BenchCell:
        spec = self.spec
        cell = BenchCell(solver=solver, h=h, coarse_h=spec.coarse_h, overlap=spec.overlap)
        if setup is None:
            cell.error = str(setup_error)
            return cell
        cell.reference_lambda = setup.reference_lambda
        try:
            started = time.perf_counter()
            result = self.run_solver(solver, setup)
            elapsed = time.perf_counter() - started
        except Exception as e:
            error = PipelineStepError(f"{solver} h={format_mesh_size(h)}", e)
            cell.error = str(error)
            return cell
        cell.iterations = result.iterations
        cell.converged = result.is_converged
        cell.eigenvalue = result.eigenvalue
        cell.seconds = elapsed if spec.record_timing else 0.0
        return cell

    def run_solver(self, solver: str, setup: MeshSetup) -> SolveResult:
        """Run one solver on a prepared mesh from the coarse start."""
        spec = self.spec
        cfg = spec.solver_config(setup.reference_lambda)
        p = setup.pencil
        if solver == "rap":
            choice = select_parameters(
                p, setup.pc, setup.x0, setup.coarse_pencil, mu=spec.mu, ell=spec.ell, seed=spec.seed
            )
            return rap_solve(p, setup.pc, choice.coefficients(), setup.x0.xhat, cfg)
        if solver == "psd":
            return psd_solve(p, setup.pc, setup.x0.xhat, cfg)
        if solver == "ra":
            return ra_solve(p, setup.start, cfg, spectrum=setup.spectrum)
        return sd_solve(p, setup.start, cfg)


def lanczos_reference(p: MatrixPencil, v0: DenseVector) -> Optional[float]:
    """
    Smallest eigenvalue by ARPACK in generalized mode, started at v0.

    Returns:
        The eigenvalue, or None if ARPACK did not converge to any value
    """
    try:
        values = spla.eigsh(
            p.a.csr, k=1, M=p.m.csr, which="SA", v0=np.asarray(v0), tol=REFERENCE_TOL, return_eigenvectors=False
        )
    except spla.ArpackNoConvergence as e:
        if e.eigenvalues is None or len(e.eigenvalues) == 0:
            logger.warning("Lanczos cross-check did not converge; keeping the long-run reference")
            return None
        values = e.eigenvalues
    return float(np.min(values))


def run_benchmark(spec: BenchSpec, progress_callback: Optional[Callable[[float, str], None]] = None) -> BenchmarkResult:
    """Run a benchmark sweep; see BenchmarkPipeline."""
    return BenchmarkPipeline(spec, progress_callback).run()
