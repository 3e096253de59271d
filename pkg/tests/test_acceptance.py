"""Desk-scale iteration-count sweeps; run with `pytest -m slow`."""
import numpy as np
import pytest

from src.config import DESK_FINE_SIZES
from src.pipeline import run_benchmark
from src.solver_options import BenchSpec

pytestmark = pytest.mark.slow

SMALL = DESK_FINE_SIZES[:3]


@pytest.fixture(scope="module")
def desk_result():
    return run_benchmark(BenchSpec(record_timing=False))


@pytest.fixture(scope="module")
def small_result():
    return run_benchmark(BenchSpec(fine_sizes=SMALL, record_timing=False))


def ratios(counts):
    return [b / a for a, b in zip(counts, counts[1:])]


def test_rap_iterations_are_mesh_independent(desk_result):
    counts = desk_result.iteration_row("rap")
    assert None not in counts
    assert all(8 <= c <= 25 for c in counts)
    assert max(counts) - min(counts) <= 6


def test_psd_iterations(desk_result):
    counts = desk_result.iteration_row("psd")
    assert None not in counts
    assert all(15 <= c <= 60 for c in counts)
    assert counts[-1] >= counts[0]


def test_ra_growth(desk_result):
    counts = desk_result.iteration_row("ra")
    assert None not in counts
    assert all(1.4 <= r <= 2.6 for r in ratios(counts))


def test_sd_growth_and_cap(desk_result):
    counts = desk_result.iteration_row("sd")
    assert counts[-1] is None
    assert desk_result.cell("sd", DESK_FINE_SIZES[-1]).marker == "×"
    assert all(3.0 <= r <= 5.5 for r in ratios(counts[:-1]))


def test_every_solver_finds_the_dense_eigenvalue(small_result):
    for cell in small_result.cells:
        assert cell.converged
        assert cell.eigenvalue == pytest.approx(cell.reference_lambda, rel=1e-9)


def test_discrete_eigenvalue_approaches_continuum(small_result):
    values = [small_result.references[h] for h in SMALL]
    target = 2.0 * np.pi ** 2
    assert all(v > target for v in values)
    assert values == sorted(values, reverse=True)
