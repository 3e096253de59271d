"""Solve Result Dataclasses

Convergence history and result outputs of the eigensolvers and the benchmark.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

import numpy as np
import pandas as pd

from .config import BENCH_COLUMNS, FAILED_MARK, HISTORY_COLUMNS, MONOTONE_SLACK, NOT_CONVERGED_MARK
from .utils import format_mesh_size


@dataclass
class ConvergenceHistory:
    """Per-iteration record of one solver run.

    Index 0 holds the starting point, so a run that performs m updates
    records m + 1 Rayleigh quotients.

    Attributes:
        solver: Name of the solver that produced the history
        rayleigh_values: Rayleigh quotient ρ_m for m = 0, 1, ...
        residual_norms: Residual norms, recorded only when requested
        elapsed_ms: Milliseconds since the start of the run, per record
        reference_lambda: Reference eigenvalue used for the gap column

        # Outcome
        converged: True if the stopping criterion was met before max_iter
        stop_reason: "reference", "residual", "max_iter" or "running"
        wall_time: Total wall time in seconds
    """

    solver: str = ""
    rayleigh_values: List[float] = field(default_factory=list)
    residual_norms: List[float] = field(default_factory=list)
    elapsed_ms: List[float] = field(default_factory=list)
    reference_lambda: Optional[float] = None

    # Outcome
    converged: bool = False
    stop_reason: str = "running"
    wall_time: float = 0.0

    @property
    def iterations(self) -> int:
        """Number of updates performed."""
        return max(len(self.rayleigh_values) - 1, 0)

    @property
    def final_value(self) -> float:
        """Last recorded Rayleigh quotient."""
        if not self.rayleigh_values:
            raise ValueError("History is empty")
        return self.rayleigh_values[-1]

    def record(self, rho: float, residual: Optional[float] = None, elapsed_ms: float = 0.0) -> None:
        """Append one iteration."""
        self.rayleigh_values.append(float(rho))
        if residual is not None:
            self.residual_norms.append(float(residual))
        self.elapsed_ms.append(float(elapsed_ms))

    def finish(self, converged: bool, stop_reason: str, wall_time: float) -> None:
        self.converged = converged
        self.stop_reason = stop_reason
        self.wall_time = wall_time

    def is_monotone(self, slack: float = MONOTONE_SLACK) -> bool:
        """True if ρ_{m+1} ≤ ρ_m·(1 + slack) for every m."""
        values = np.asarray(self.rayleigh_values)
        if values.size < 2:
            return True
        return bool(np.all(values[1:] <= values[:-1] * (1.0 + slack)))

    def gaps(self, lam: Optional[float] = None) -> np.ndarray:
        """Relative gaps (ρ_m − λ)/λ against lam or the stored reference."""
        lam = self.reference_lambda if lam is None else lam
        if lam is None:
            raise ValueError("No reference eigenvalue available for gaps")
        return (np.asarray(self.rayleigh_values) - lam) / lam

    def fitted_rate(self, lam: Optional[float] = None, skip: int = 1) -> float:
        """
        Estimate the linear convergence factor of the eigenvalue gap.

        Fits log(gap_m) ≈ a + m·log(q) by least squares over the iterations
        with a positive gap, ignoring the first `skip` records.

        Returns:
            The factor q, or nan if fewer than two usable records exist
        """
        gaps = self.gaps(lam)
        steps = np.arange(gaps.size)
        usable = (steps >= skip) & (gaps > 0.0)
        if np.count_nonzero(usable) < 2:
            return float("nan")
        slope, _ = np.polyfit(steps[usable], np.log(gaps[usable]), 1)
        return float(np.exp(slope))

    def to_dataframe(self) -> pd.DataFrame:
        """Convert to a DataFrame with columns iter, rayleigh, gap, residual, elapsed_ms."""
        n = len(self.rayleigh_values)
        residual = self.residual_norms if len(self.residual_norms) == n else [np.nan] * n
        elapsed = self.elapsed_ms if len(self.elapsed_ms) == n else [np.nan] * n
        gap = self.gaps() if self.reference_lambda is not None else np.full(n, np.nan)
        return pd.DataFrame(
            {
                "iter": np.arange(n),
                "rayleigh": self.rayleigh_values,
                "gap": gap,
                "residual": residual,
                "elapsed_ms": elapsed,
            },
            columns=HISTORY_COLUMNS,
        )

    def to_csv(self, path: str) -> None:
        self.to_dataframe().to_csv(path, index=False, float_format="%.17g")


@dataclass
class SolveResult:
    """Result of one eigensolver run.

    Unpacks as (lambda, x, history) so callers can write
    ``lam, x, hist = rap_solve(...)``.

    Attributes:
        eigenvalue: Final Rayleigh quotient
        x: Final iterate as a PairedVector (B-normalized)
        history: Convergence history of the run

        # Error Handling
        error: Error message if the run broke down (None otherwise)
    """

    eigenvalue: float
    x: Any
    history: ConvergenceHistory

    # Error Handling
    error: Optional[str] = None

    def __iter__(self) -> Iterator[Any]:
        return iter((self.eigenvalue, self.x, self.history))

    @property
    def iterations(self) -> int:
        return self.history.iterations

    @property
    def is_converged(self) -> bool:
        """True if the run met its stopping criterion."""
        return self.history.converged and self.error is None

    @property
    def is_failed(self) -> bool:
        """True if the run ended with an error."""
        return self.error is not None


@dataclass
class BenchCell:
    """One (solver, h) entry of a benchmark table.

    Attributes:
        solver: Solver name
        h: Fine mesh size
        coarse_h: Coarse mesh size H
        overlap: Overlap fraction of H

        # Outcome
        iterations: Updates performed (None if the cell failed)
        converged: True if the stopping criterion was met before max_iter
        eigenvalue: Final Rayleigh quotient (None if the cell failed)
        reference_lambda: Reference eigenvalue λʰ of the mesh
        seconds: Wall time of the solver run

        # Error Handling
        error: Error message if the cell failed (None otherwise)
    """

    solver: str
    h: float
    coarse_h: float
    overlap: float

    # Outcome
    iterations: Optional[int] = None
    converged: bool = False
    eigenvalue: Optional[float] = None
    reference_lambda: Optional[float] = None
    seconds: float = 0.0

    # Error Handling
    error: Optional[str] = None

    @property
    def is_failed(self) -> bool:
        return self.error is not None

    @property
    def gap(self) -> Optional[float]:
        """Relative gap (λ − λʰ)/λʰ."""
        if self.eigenvalue is None or self.reference_lambda is None:
            return None
        return (self.eigenvalue - self.reference_lambda) / self.reference_lambda

    @property
    def marker(self) -> str:
        """Table entry: the iteration count, "×" at the cap, "fail" on error."""
        if self.is_failed:
            return FAILED_MARK
        if not self.converged:
            return NOT_CONVERGED_MARK
        return str(self.iterations)

    def to_row(self) -> dict:
        return {
            "solver": self.solver,
            "h": self.h,
            "H": self.coarse_h,
            "overlap": self.overlap,
            "iters": self.iterations,
            "converged": self.converged,
            "lambda": self.eigenvalue,
            "gap": self.gap,
            "seconds": self.seconds,
        }


@dataclass
class BenchmarkResult:
    """Result of one benchmark sweep.

    Attributes:
        cells: One entry per (solver, h), ordered solver-major as requested
        references: Reference eigenvalue per fine mesh size
    """

    cells: List[BenchCell] = field(default_factory=list)
    references: Dict[float, float] = field(default_factory=dict)

    @property
    def failed_cells(self) -> List[BenchCell]:
        return [cell for cell in self.cells if cell.is_failed]

    def cell(self, solver: str, h: float) -> BenchCell:
        for candidate in self.cells:
            if candidate.solver == solver and candidate.h == h:
                return candidate
        raise KeyError(f"No benchmark cell for solver={solver!r}, h={h}")

    def iteration_row(self, solver: str) -> List[Optional[int]]:
        """Iteration counts of one solver in mesh order (None for failed or capped cells)."""
        return [
            cell.iterations if (cell.converged and not cell.is_failed) else None
            for cell in self.cells
            if cell.solver == solver
        ]

    def to_dataframe(self) -> pd.DataFrame:
        frame = pd.DataFrame([cell.to_row() for cell in self.cells], columns=BENCH_COLUMNS)
        frame["iters"] = frame["iters"].astype("Int64")
        return frame

    def to_csv(self, path: Optional[str] = None) -> str:
        """Serialize as CSV; the text is returned and optionally written to path."""
        text = self.to_dataframe().to_csv(index=False, float_format="%.15g", lineterminator="\n")
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        return text

    def format_table(self) -> str:
        """Aligned text table with one row per solver and one column per h."""
        solvers = list(dict.fromkeys(cell.solver for cell in self.cells))
        sizes = list(dict.fromkeys(cell.h for cell in self.cells))
        header = ["h"] + [format_mesh_size(h) for h in sizes]
        rows = [header]
        for solver in solvers:
            by_h = {cell.h: cell.marker for cell in self.cells if cell.solver == solver}
            rows.append([solver.upper()] + [by_h.get(h, "") for h in sizes])
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        lines = [
            "  ".join(value.rjust(width) if i else value.ljust(width) for i, (value, width) in enumerate(zip(row, widths)))
            for row in rows
        ]
        return "\n".join(lines) + "\n"
