import numpy as np
import pytest

from src.config import FAILED_MARK
from src.exceptions import ReferenceMismatchError
from src.linalg import dense_generalized_eig
from src.pipeline import BenchmarkPipeline, MeshSetup, lanczos_reference, run_benchmark
from src.solver_options import BenchSpec

SMALL_GRID = (2.0 ** -3, 2.0 ** -4)


@pytest.fixture
def small_spec():
    return BenchSpec(fine_sizes=SMALL_GRID, record_timing=False)


class TestBenchmarkPipeline:
    def test_all_cells_converge(self, small_spec):
        result = run_benchmark(small_spec)
        assert len(result.cells) == 4 * len(SMALL_GRID)
        assert not result.failed_cells
        for cell in result.cells:
            assert cell.converged
            assert -1e-13 <= cell.gap <= small_spec.tol
            assert cell.seconds == 0.0

    def test_solver_major_order(self, small_spec):
        result = run_benchmark(small_spec)
        assert [(c.solver, c.h) for c in result.cells] == [
            (solver, h) for solver in small_spec.solvers for h in SMALL_GRID
        ]

    def test_references_are_dense_eigenvalues(self, small_spec):
        pipeline = BenchmarkPipeline(small_spec)
        setup = pipeline.setup_mesh(2.0 ** -3)
        assert isinstance(setup, MeshSetup)
        assert setup.reference_lambda == pytest.approx(dense_generalized_eig(setup.pencil)[0][0], rel=1e-14)
        assert setup.spectrum.lambda1 <= setup.spectrum.lambda2 <= setup.spectrum.lambdan
        assert setup.pc is not None and setup.x0 is not None

    def test_acceleration_beats_descent(self, small_spec):
        result = run_benchmark(small_spec)
        for h in SMALL_GRID:
            assert result.cell("rap", h).iterations <= result.cell("psd", h).iterations
            assert result.cell("psd", h).iterations < result.cell("sd", h).iterations
            assert result.cell("ra", h).iterations < result.cell("sd", h).iterations

    def test_preconditioned_counts_at_default_overlap(self):
        sizes = (2.0 ** -3, 2.0 ** -4, 2.0 ** -5)
        result = run_benchmark(BenchSpec(fine_sizes=sizes, solvers=["rap", "psd"], record_timing=False))
        rap = result.iteration_row("rap")
        psd = result.iteration_row("psd")
        assert None not in rap and None not in psd
        assert all(8 <= c <= 25 for c in rap)
        assert max(rap) - min(rap) <= 6
        assert all(15 <= c <= 60 for c in psd)

    def test_unpreconditioned_grid_skips_schwarz(self):
        spec = BenchSpec(fine_sizes=(2.0 ** -3,), solvers=["sd"], record_timing=False)
        setup = BenchmarkPipeline(spec).setup_mesh(2.0 ** -3)
        assert setup.pc is None

    def test_deterministic_csv(self, small_spec, tmp_path):
        first = run_benchmark(small_spec).to_csv(str(tmp_path / "a.csv"))
        second = run_benchmark(BenchSpec(fine_sizes=SMALL_GRID, record_timing=False, max_workers=4)).to_csv()
        assert first == second
        assert (tmp_path / "a.csv").read_text(encoding="utf-8") == first

    def test_progress_callback(self, small_spec):
        seen = []
        BenchmarkPipeline(small_spec, lambda fraction, desc: seen.append((fraction, desc))).run()
        fractions = [f for f, _ in seen]
        assert fractions[0] == 0.0
        assert fractions[-1] == 1.0
        assert fractions == sorted(fractions)
        assert seen[-1][1] == "Complete!"

    def test_failing_cell_is_marked(self, small_spec, monkeypatch):
        pipeline = BenchmarkPipeline(small_spec)
        original = pipeline.run_solver

        def flaky(solver, setup):
            if solver == "ra" and setup.h == SMALL_GRID[1]:
                raise RuntimeError("boom")
            return original(solver, setup)

        monkeypatch.setattr(pipeline, "run_solver", flaky)
        result = pipeline.run()
        failed = result.failed_cells
        assert [(c.solver, c.h) for c in failed] == [("ra", SMALL_GRID[1])]
        assert "boom" in failed[0].error
        assert failed[0].marker == FAILED_MARK
        assert result.cell("ra", SMALL_GRID[0]).converged
        assert FAILED_MARK in result.format_table()

    def test_failing_setup_marks_its_column(self, small_spec, monkeypatch):
        pipeline = BenchmarkPipeline(small_spec)
        original = pipeline.setup_mesh

        def broken(h):
            if h == SMALL_GRID[0]:
                raise ReferenceMismatchError(1.0, 2.0, 1e-11)
            return original(h)

        monkeypatch.setattr(pipeline, "setup_mesh", broken)
        result = pipeline.run()
        assert {c.h for c in result.failed_cells} == {SMALL_GRID[0]}
        assert len(result.failed_cells) == 4
        assert SMALL_GRID[0] not in result.references
        assert all("setup" in c.error for c in result.failed_cells)

    def test_capped_runs_are_marked(self):
        spec = BenchSpec(fine_sizes=(2.0 ** -4,), solvers=["sd"], max_iter=3, record_timing=False)
        cell = run_benchmark(spec).cells[0]
        assert not cell.converged
        assert cell.iterations == 3
        assert cell.marker == "×"

    def test_manual_parameters(self):
        spec = BenchSpec(fine_sizes=(2.0 ** -3,), solvers=["rap"], mu=1.0, ell=100.0, record_timing=False)
        cell = run_benchmark(spec).cells[0]
        assert cell.converged


def test_lanczos_reference(fem_setup):
    _, p, _, _ = fem_setup
    lam = dense_generalized_eig(p)[0][0]
    assert lanczos_reference(p, np.ones(p.n)) == pytest.approx(lam, rel=1e-10)


@pytest.mark.slow
def test_long_run_reference_above_dense_limit():
    spec = BenchSpec(fine_sizes=(2.0 ** -6,), solvers=["psd"], record_timing=False)
    setup = BenchmarkPipeline(spec).setup_mesh(2.0 ** -6)
    assert setup.pencil.n == 63 * 63
    assert setup.reference_lambda == pytest.approx(lanczos_reference(setup.pencil, setup.start), rel=1e-10)
    assert abs(setup.reference_lambda - 2.0 * np.pi ** 2) < 0.01 * 2.0 * np.pi ** 2
