import math

import numpy as np
import pytest
import scipy.sparse as sp

from src.exceptions import CoefficientError, DegenerateBasisError, DomainError, NumericalBreakdownError
from src.linalg import MatrixPencil, SpdMatrix, dense_generalized_eig, rayleigh_quotient
from src.manifold.paired import PairedVector
from src.manifold.sphere import SpherePoint
from src.precond import (
    PreconditionerHandle,
    coarse_eigen_initial,
    coarse_smallest_eigenvector,
    exact_preconditioner,
    galerkin_coarse_pencil,
    identity_preconditioner,
)
from src.solver_options import SolverConfig
from src.solvers import (
    UNIT_SPHERE,
    RayleighObjective,
    ResidualMeter,
    compute_coefficients,
    estimate_spectrum,
    gradient_flow_invariants,
    initial_gap_admissible,
    lorag_solve,
    m_sphere_parameters,
    psd_solve,
    ra_solve,
    rap_solve,
    rate_bound,
    sd_solve,
    select_parameters,
    stopping_check,
)
from tests.conftest import diagonal_pencil, random_pencil, random_spd


def never_stop(lambda1: float, max_iter: int, **kwargs) -> SolverConfig:
    """Config whose gap test cannot pass, so the run uses all max_iter steps."""
    return SolverConfig(tol=1e-10, max_iter=max_iter, reference_lambda=0.5 * lambda1, **kwargs)


class TestCoefficients:
    def test_kappa_nine(self):
        c = compute_coefficients(1.0, 9.0)
        assert c.beta == pytest.approx(1.5)
        assert c.alpha == pytest.approx((math.sqrt(9 / 4 + 4 * (5 / 2) / 9) - 3 / 2) / 2)

    def test_kappa_sixteen(self):
        c = compute_coefficients(2.0, 32.0)
        assert c.kappa == pytest.approx(16.0)
        assert c.beta == pytest.approx(0.75)

    @pytest.mark.parametrize("kappa", [9.0, 16.0, 100.0, 1e4])
    def test_relations(self, kappa):
        c = compute_coefficients(0.5, 0.5 * kappa)
        assert c.gamma_bar / c.gamma == pytest.approx(1.0 + c.beta, rel=1e-14)
        assert c.gamma == pytest.approx(c.alpha * c.mu / (c.alpha + c.beta))
        assert 0.0 < c.alpha < 1.0
        assert c.beta > 0.0

    @pytest.mark.parametrize("kappa", [9.0, 25.0, 400.0])
    def test_variants_coincide(self, kappa):
        # β = 3/(2√κ − 4) makes 1/(2√κ) the root of α² + βα = (1 + β)/κ
        alg = compute_coefficients(1.0, kappa, "algorithm")
        closed = compute_coefficients(1.0, kappa, "closed_form")
        assert alg.alpha == pytest.approx(closed.alpha, rel=1e-12)
        assert closed.alpha == pytest.approx(1.0 / (2.0 * math.sqrt(kappa)))

    def test_rejects_small_kappa(self):
        with pytest.raises(CoefficientError):
            compute_coefficients(1.0, 8.0)

    @pytest.mark.parametrize("mu, ell", [(0.0, 9.0), (2.0, 1.0), (-1.0, 9.0)])
    def test_rejects_bad_constants(self, mu, ell):
        with pytest.raises(DomainError):
            compute_coefficients(mu, ell)

    def test_rejects_unknown_variant(self):
        with pytest.raises(DomainError):
            compute_coefficients(1.0, 9.0, "nesterov")

    def test_rate_bound(self):
        assert rate_bound(16.0, 0) == pytest.approx(2.0)
        assert rate_bound(16.0, 1) == pytest.approx(1.75)
        assert rate_bound(100.0, 50) < rate_bound(100.0, 10)

    def test_initial_gap_admissible(self):
        assert initial_gap_admissible(1.0, 1.0, 1.5, 9.0)
        assert not initial_gap_admissible(1.2, 1.0, 1.5, 9.0)


class TestStopping:
    def test_exact_reference(self):
        decision = stopping_check(2.0, SolverConfig(reference_lambda=2.0))
        assert decision.converged
        assert decision.reason == "reference"

    def test_just_above_threshold(self):
        cfg = SolverConfig(tol=1e-10, reference_lambda=3.0)
        assert not stopping_check(3.0 * (1.0 + 2e-10), cfg).converged

    def test_residual_fallback(self):
        cfg = SolverConfig(residual_tol=1e-8)
        assert stopping_check(4.0, cfg, residual=1e-9).reason == "residual"
        assert not stopping_check(4.0, cfg, residual=1e-6).converged
        assert not stopping_check(4.0, cfg).converged

    def test_residual_meter(self, small_pencil):
        values, vectors = dense_generalized_eig(small_pencil)
        meter = ResidualMeter(small_pencil)
        assert meter(vectors[:, 0], values[0]) < 1e-10
        assert meter(vectors[:, 0], values[1]) > 1e-3


class TestRap:
    def test_random_pencil_matches_oracle(self, rng):
        p = random_pencil(rng, 8)
        lam = dense_generalized_eig(p)[0][0]
        coeffs = compute_coefficients(1.0, 50.0)
        cfg = SolverConfig(max_iter=5000, reference_lambda=lam)
        result = rap_solve(p, identity_preconditioner(8), coeffs, rng.standard_normal(8), cfg)
        assert result.is_converged
        assert result.eigenvalue == pytest.approx(lam, rel=1e-9)
        assert result.history.is_monotone()

    def test_exact_start(self, rng):
        p = random_pencil(rng, 10)
        values, vectors = dense_generalized_eig(p)
        cfg = SolverConfig(reference_lambda=values[0])
        result = rap_solve(p, exact_preconditioner(p.a), compute_coefficients(1.0, 9.0), p.a @ vectors[:, 0], cfg)
        assert result.iterations <= 2
        assert result.eigenvalue == pytest.approx(values[0], rel=1e-10)

    def test_result_unpacks(self, rng):
        p = random_pencil(rng, 6)
        lam, x, history = rap_solve(
            p, identity_preconditioner(6), compute_coefficients(1.0, 20.0), np.ones(6), SolverConfig(max_iter=5)
        )
        assert isinstance(x, PairedVector)
        assert lam == history.final_value
        assert history.solver == "rap"

    def test_co_iterates_stay_consistent(self, rng):
        n = 40
        p = MatrixPencil(SpdMatrix.from_dense(random_spd(rng, n, 1e3)), SpdMatrix.from_dense(random_spd(rng, n, 3.0)))
        b_dense = random_spd(rng, n, 10.0)
        lam = dense_generalized_eig(p)[0][0]
        result = rap_solve(
            p,
            exact_preconditioner(SpdMatrix.from_dense(b_dense)),
            compute_coefficients(1.0, 400.0),
            rng.standard_normal(n),
            never_stop(lam, 100),
        )
        x = result.x
        bx = b_dense @ x.x
        assert result.iterations == 100
        assert np.linalg.norm(x.xhat - bx) <= 1e-7 * np.linalg.norm(bx)
        assert x.b_norm_squared() == pytest.approx(1.0, abs=1e-10)
        assert result.history.is_monotone()

    @pytest.mark.parametrize("v_step", ["listing", "log_map"])
    def test_schwarz_run_is_monotone(self, fem_setup, v_step):
        hierarchy, p, _, pc = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        x0 = coarse_eigen_initial(hierarchy, coarse, pc)
        lam = dense_generalized_eig(p)[0][0]
        choice = select_parameters(p, pc, x0, coarse)
        cfg = SolverConfig(max_iter=200, reference_lambda=lam, v_step=v_step)
        result = rap_solve(p, pc, choice.coefficients(), x0.xhat, cfg)
        assert result.is_converged
        assert result.history.is_monotone()

    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_scale_invariance(self, rng, alpha):
        p = random_pencil(rng, 10)
        lam = dense_generalized_eig(p)[0][0]
        coeffs = compute_coefficients(1.0, 30.0)
        x0 = rng.standard_normal(10)
        cfg = SolverConfig(max_iter=3000, reference_lambda=lam)
        base = rap_solve(p, identity_preconditioner(10), coeffs, x0, cfg)
        scaled = rap_solve(p.scaled(alpha), identity_preconditioner(10), coeffs, x0, cfg)
        assert scaled.iterations == base.iterations
        np.testing.assert_allclose(scaled.history.rayleigh_values, base.history.rayleigh_values, rtol=1e-10)

    def test_indefinite_preconditioner_breaks_down(self, rng):
        p = random_pencil(rng, 5)
        flip = PreconditionerHandle(5, lambda r: -r, "flip")
        with pytest.raises(NumericalBreakdownError):
            rap_solve(p, flip, compute_coefficients(1.0, 9.0), np.ones(5))

    def test_zero_start(self, small_pencil):
        with pytest.raises(DomainError):
            rap_solve(small_pencil, identity_preconditioner(12), compute_coefficients(1.0, 9.0), np.zeros(12))


class TestLorag:
    def test_diagonal_sphere(self):
        p = diagonal_pencil([1.0, 2.0, 3.0])
        cfg = SolverConfig(max_iter=500, reference_lambda=1.0)
        f_min, x, history = lorag_solve(
            UNIT_SPHERE, RayleighObjective(p), compute_coefficients(1.0, 9.0), np.array([1.0, 0.1, 0.1]), cfg
        )
        assert f_min == pytest.approx(1.0, rel=1e-10)
        assert abs(x.coords[0]) == pytest.approx(1.0)
        assert history.is_monotone()

    def test_stationary_start(self):
        p = diagonal_pencil([1.0, 2.0, 3.0])
        cfg = SolverConfig(max_iter=5, reference_lambda=0.5)
        f_min, x, history = lorag_solve(
            UNIT_SPHERE, RayleighObjective(p), compute_coefficients(1.0, 9.0), np.array([0.0, 1.0, 0.0]), cfg
        )
        assert f_min == pytest.approx(2.0)
        np.testing.assert_allclose(np.abs(x.coords), [0.0, 1.0, 0.0], atol=1e-14)
        assert history.iterations == 5

    def test_oracle_failure_becomes_breakdown(self):
        p = diagonal_pencil([1.0, 2.0, 3.0])

        class EmptyRitzBasis(RayleighObjective):
            def minimize_over(self, y, directions):
                raise DegenerateBasisError("every basis vector vanished")

        start = SpherePoint.normalized([1.0, 1.0, 1.0])
        with pytest.raises(NumericalBreakdownError) as info:
            lorag_solve(UNIT_SPHERE, EmptyRitzBasis(p), compute_coefficients(1.0, 9.0), start, never_stop(1.0, 5))
        assert info.value.iteration == 1
        np.testing.assert_array_equal(info.value.last_iterate.coords, start.coords)
        assert len(info.value.history.rayleigh_values) == 1

    def test_zero_start(self):
        p = diagonal_pencil([1.0, 2.0, 3.0])
        with pytest.raises(DomainError):
            lorag_solve(UNIT_SPHERE, RayleighObjective(p), compute_coefficients(1.0, 9.0), np.zeros(3))

    @pytest.mark.parametrize("v_step", ["listing", "log_map"])
    def test_matches_rap_with_identity_metric(self, rng, v_step):
        values = np.linspace(1.0, 30.0, 25)
        p = diagonal_pencil(values)
        coeffs = compute_coefficients(1.0, 60.0)
        x0 = np.abs(rng.standard_normal(25)) + 0.1
        cfg = never_stop(1.0, 10, v_step=v_step)
        rap = rap_solve(p, identity_preconditioner(25), coeffs, x0, cfg)
        lorag = lorag_solve(UNIT_SPHERE, RayleighObjective(p), coeffs, SpherePoint.normalized(x0), cfg)
        np.testing.assert_allclose(rap.history.rayleigh_values, lorag.history.rayleigh_values, rtol=1e-10)
        sign = np.sign(float(rap.x.x @ lorag.x.coords))
        np.testing.assert_allclose(sign * rap.x.x, lorag.x.coords, atol=1e-10)


class TestPsd:
    def test_small_pencil(self, rng):
        p = random_pencil(rng, 6, cond_a=10.0, cond_m=2.0)
        lam = dense_generalized_eig(p)[0][0]
        result = psd_solve(p, identity_preconditioner(6), rng.standard_normal(6), SolverConfig(max_iter=500, reference_lambda=lam))
        assert result.is_converged
        assert result.eigenvalue == pytest.approx(lam, rel=1e-9)
        assert result.history.is_monotone()

    def test_exact_preconditioner_decreases_gap(self, rng):
        p = random_pencil(rng, 10)
        values, vectors = dense_generalized_eig(p)
        start = vectors[:, 0] + 0.05 * vectors[:, 3]
        result = psd_solve(p, exact_preconditioner(p.a), p.a @ start, never_stop(values[0], 1))
        rho = result.history.rayleigh_values
        assert rho[1] - values[0] < rho[0] - values[0]

    def test_fewer_iterations_than_unpreconditioned(self, fem_setup):
        hierarchy, p, _, pc = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        x0 = coarse_eigen_initial(hierarchy, coarse, pc)
        lam = dense_generalized_eig(p)[0][0]
        cfg = SolverConfig(max_iter=5000, reference_lambda=lam)
        psd = psd_solve(p, pc, x0.xhat, cfg)
        sd = sd_solve(p, hierarchy.interp @ coarse_smallest_eigenvector(coarse), cfg)
        assert psd.is_converged and sd.is_converged
        assert psd.iterations < sd.iterations


class TestBaselines:
    @pytest.mark.parametrize("solve", [sd_solve, ra_solve])
    def test_converge_on_fem(self, fem_setup, solve):
        hierarchy, p, _, _ = fem_setup
        lam = dense_generalized_eig(p)[0][0]
        coarse = galerkin_coarse_pencil(hierarchy, p)
        start = hierarchy.interp @ dense_generalized_eig(coarse)[1][:, 0]
        result = solve(p, start, SolverConfig(max_iter=20000, reference_lambda=lam))
        assert result.is_converged
        assert result.eigenvalue == pytest.approx(lam, rel=1e-9)
        assert result.history.is_monotone()
        assert isinstance(result.x, PairedVector)

    def test_mass_normalized_result(self, fem_setup):
        _, p, _, _ = fem_setup
        result = sd_solve(p, np.ones(p.n), SolverConfig(max_iter=3))
        assert result.x.x @ (p.m @ result.x.x) == pytest.approx(1.0, abs=1e-10)


class TestParameters:
    def test_manual(self, fem_setup):
        hierarchy, p, _, pc = fem_setup
        x0 = coarse_eigen_initial(hierarchy, galerkin_coarse_pencil(hierarchy, p), pc)
        choice = select_parameters(p, pc, x0, mu=2.0, ell=50.0)
        assert choice.source == "manual"
        assert choice.kappa == pytest.approx(25.0)

    def test_manual_needs_both(self, fem_setup):
        hierarchy, p, _, pc = fem_setup
        x0 = coarse_eigen_initial(hierarchy, galerkin_coarse_pencil(hierarchy, p), pc)
        with pytest.raises(DomainError):
            select_parameters(p, pc, x0, mu=2.0)

    def test_auto(self, fem_setup):
        hierarchy, p, _, pc = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        x0 = coarse_eigen_initial(hierarchy, coarse, pc)
        choice = select_parameters(p, pc, x0, coarse)
        assert choice.source == "auto"
        assert choice.mu > 0.0
        assert choice.kappa >= 9.0 - 1e-12
        assert 0.0 < choice.nu_min <= choice.nu_max
        record = choice.to_dict()
        assert record["kappa"] == pytest.approx(choice.kappa)
        assert "lambda1" in record

    def test_auto_is_scale_invariant(self, fem_setup):
        hierarchy, p, _, pc = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        x0 = coarse_eigen_initial(hierarchy, coarse, pc)
        base = select_parameters(p, pc, x0, coarse)
        scaled = select_parameters(p.scaled(2.0), pc, x0, coarse.scaled(2.0))
        assert scaled.mu == pytest.approx(base.mu, rel=1e-8)
        assert scaled.ell == pytest.approx(base.ell, rel=1e-8)

    def test_m_sphere(self):
        choice = m_sphere_parameters(1.0, 2.0, 10.0)
        assert choice.mu == pytest.approx(2.0)
        assert choice.ell == pytest.approx(18.0)
        assert not choice.floored

    def test_m_sphere_floor(self):
        choice = m_sphere_parameters(1.0, 2.0, 3.0)
        assert choice.floored
        assert choice.kappa == pytest.approx(9.0)

    def test_m_sphere_level_range(self):
        assert m_sphere_parameters(1.0, 3.0, 10.0, rho_x=1.5).mu == pytest.approx(2.0)
        with pytest.raises(DomainError):
            m_sphere_parameters(1.0, 3.0, 10.0, rho_x=2.0)

    def test_estimate_spectrum_dense(self):
        spectrum = estimate_spectrum(diagonal_pencil([3.0, 1.0, 7.0, 2.0]))
        assert (spectrum.lambda1, spectrum.lambda2, spectrum.lambdan) == pytest.approx((1.0, 2.0, 7.0))


class TestFlow:
    def test_pointwise_invariants(self, fem_setup, rng):
        _, p, _, pc = fem_setup
        x = rng.standard_normal(p.n)
        flow = gradient_flow_invariants(p, pc, x)
        assert flow.rho == pytest.approx(rayleigh_quotient(p, x))
        assert abs(flow.grad_dot_x) < 1e-10 * np.linalg.norm(x) * flow.rho
        assert abs(flow.b_norm_rate) < 1e-9 * np.linalg.norm(x) * flow.rho
        assert flow.energy_rate < 0.0
        assert flow.is_dissipating()
        assert flow.dissipation_bound is None

    def test_rate_terms_below_second_eigenvalue(self, fem_setup):
        hierarchy, p, _, pc = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        x0 = coarse_eigen_initial(hierarchy, coarse, pc)
        values = dense_generalized_eig(p)[0]
        flow = gradient_flow_invariants(p, pc, x0.x, values[0], values[1], kappa_nu=4.0)
        assert values[0] < flow.rho < values[1]
        assert flow.rate_constant > 0.0
        assert flow.dissipation_bound < 0.0


def test_accelerated_rate_on_diagonal_pencil():
    rng = np.random.default_rng(7)
    values = np.linspace(1.0, 200.0, 200)
    values[1] = 1.5
    p = MatrixPencil.standard(SpdMatrix(sp.diags(values).tocsr()))
    b = values * (1.0 + 3.0 * rng.random(200))
    pc = PreconditionerHandle(200, lambda r: r / b, "perturbed")
    x0 = PairedVector.from_twin(np.ones(200), pc.apply)
    choice = select_parameters(p, pc, x0)
    result = rap_solve(p, pc, choice.coefficients(), x0.xhat, SolverConfig(max_iter=2000, reference_lambda=1.0))
    assert result.is_converged
    assert result.iterations >= 4
    rate = result.history.fitted_rate(1.0)
    assert rate <= 1.0 - 1.0 / (2.0 * math.sqrt(choice.kappa)) + 0.1

