import numpy as np
import pytest
import scipy.linalg as sla

from src.exceptions import (
    DimensionMismatchError,
    DomainError,
    MatrixError,
    MissingDependencyError,
    PreconditionerStateError,
    SubdomainConstructionError,
    ValidationError,
)
from src.fem import assemble_laplacian_p1, build_mesh_hierarchy
from src.linalg import SpdMatrix, rayleigh_quotient
from src.precond import (
    SchwarzDecomposition,
    assemble_explicit_b,
    assemble_explicit_inverse,
    build_additive_schwarz,
    build_two_level_overlapping,
    coarse_eigen_initial,
    coarse_smallest_eigenvector,
    coloring_count,
    exact_preconditioner,
    factorize_spd,
    galerkin_coarse_pencil,
    identity_preconditioner,
    is_available,
    jacobi_preconditioner,
    mass_preconditioner,
    schwarz_apply,
    schwarz_preconditioner,
)
from tests.conftest import random_spd


class TestFactorization:
    @pytest.mark.parametrize("backend", ["auto", "splu"])
    def test_solves(self, rng, backend):
        dense = random_spd(rng, 10, cond=1e3)
        solve = factorize_spd(SpdMatrix.from_dense(dense), backend)
        b = rng.standard_normal(10)
        np.testing.assert_allclose(dense @ solve(b), b, atol=1e-9)

    def test_rejects_indefinite(self):
        with pytest.raises(MatrixError):
            factorize_spd(SpdMatrix.from_dense(np.diag([1.0, -2.0, 3.0])), "splu")

    @pytest.mark.skipif(is_available(), reason="CHOLMOD is installed")
    def test_missing_cholmod(self):
        with pytest.raises(MissingDependencyError, match="scikit-sparse"):
            factorize_spd(SpdMatrix.identity(2), "cholmod")


class TestSimpleHandles:
    def test_identity(self):
        pc = identity_preconditioner(3)
        r = np.array([1.0, 2.0, 3.0])
        out = pc(r)
        np.testing.assert_array_equal(out, r)
        assert out is not r

    def test_jacobi(self, fem_setup):
        _, p, _, _ = fem_setup
        pc = jacobi_preconditioner(p.a)
        np.testing.assert_allclose(pc.apply(np.ones(p.n)), 1.0 / p.a.diagonal())

    def test_jacobi_needs_positive_diagonal(self):
        with pytest.raises(DomainError):
            jacobi_preconditioner(SpdMatrix.from_dense(np.diag([1.0, 0.0])))

    def test_exact_and_mass(self, fem_setup):
        _, p, _, _ = fem_setup
        x = np.linspace(0.0, 1.0, p.n)
        np.testing.assert_allclose(exact_preconditioner(p.a).apply(p.a @ x), x, atol=1e-10)
        np.testing.assert_allclose(mass_preconditioner(p.m).apply(p.m @ x), x, atol=1e-10)

    def test_apply_checks_dimension(self):
        with pytest.raises(DimensionMismatchError):
            identity_preconditioner(3).apply(np.ones(4))

    def test_explicit_b_inverts(self, rng):
        dense = random_spd(rng, 6)
        pc = exact_preconditioner(SpdMatrix.from_dense(dense))
        np.testing.assert_allclose(assemble_explicit_inverse(pc), np.linalg.inv(dense), atol=1e-10)
        np.testing.assert_allclose(assemble_explicit_b(pc), dense, atol=1e-8)


class TestSchwarz:
    def test_structure(self, fem_setup):
        hierarchy, _, d, _ = fem_setup
        assert d.num_subdomains == 16
        assert d.has_coarse_space
        assert d.is_factorized
        assert d.covers_all_indices()
        assert d.coarse_matrix.n == hierarchy.coarse.n_interior

    def test_inverse_is_spd(self, fem_setup):
        _, p, _, pc = fem_setup
        binv = assemble_explicit_inverse(pc)
        raw = np.column_stack([pc.apply(e) for e in np.eye(p.n)])
        np.testing.assert_allclose(raw, raw.T, atol=1e-10)
        assert np.linalg.eigvalsh(binv)[0] > 0.0

    def test_spectrum_bounds(self, fem_setup):
        _, p, d, pc = fem_setup
        b = assemble_explicit_b(pc)
        nu = sla.eigh(p.a.toarray(), b, eigvals_only=True)
        assert nu[0] > 0.0
        assert nu[-1] <= coloring_count(d, p.a) + 1 + 1e-8

    def test_threaded_apply_matches_serial(self, fem_setup, rng):
        hierarchy, p, _, pc = fem_setup
        threaded = build_two_level_overlapping(hierarchy, 0.5, p.a, max_workers=4)
        r = rng.standard_normal(p.n)
        np.testing.assert_allclose(schwarz_apply(threaded, r), pc.apply(r), atol=1e-13)

    def test_unfactorized_apply(self, fem_setup):
        _, p, d, _ = fem_setup
        raw = SchwarzDecomposition(n=d.n, subdomain_sets=d.subdomain_sets, local_matrices=d.local_matrices)
        assert not raw.is_factorized
        with pytest.raises(PreconditionerStateError):
            schwarz_apply(raw, np.ones(p.n))
        with pytest.raises(PreconditionerStateError):
            schwarz_preconditioner(raw)

    def test_empty_subdomain(self, fem_setup):
        _, p, _, _ = fem_setup
        with pytest.raises(SubdomainConstructionError):
            build_additive_schwarz(p.a, [np.arange(3), np.array([], dtype=np.intp)])

    def test_out_of_range_subdomain(self, fem_setup):
        _, p, _, _ = fem_setup
        with pytest.raises(ValidationError):
            build_additive_schwarz(p.a, [np.array([0, p.n])])

    def test_single_subdomain_is_exact(self, fem_setup, rng):
        _, p, _, _ = fem_setup
        d = build_additive_schwarz(p.a, [np.arange(p.n)])
        r = rng.standard_normal(p.n)
        np.testing.assert_allclose(p.a @ schwarz_apply(d, r), r, atol=1e-10)
        assert coloring_count(d, p.a) == 1

    def test_one_level_without_coarse_space(self):
        hierarchy = build_mesh_hierarchy(1.0, 0.125)
        p = assemble_laplacian_p1(hierarchy.fine)
        d = build_two_level_overlapping(hierarchy, 0.5, p.a)
        assert not d.has_coarse_space
        assert d.num_subdomains == 1

    def test_wrong_fine_matrix(self, fem_setup):
        hierarchy, _, _, _ = fem_setup
        with pytest.raises(DimensionMismatchError):
            build_two_level_overlapping(hierarchy, 0.5, SpdMatrix.identity(5))


class TestCoarseStart:
    def test_coarse_eigenvector_sign(self, fem_setup):
        hierarchy, p, _, _ = fem_setup
        u0 = coarse_smallest_eigenvector(galerkin_coarse_pencil(hierarchy, p))
        assert u0.sum() >= 0.0

    def test_start_point(self, fem_setup):
        hierarchy, p, _, pc = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        x0 = coarse_eigen_initial(hierarchy, coarse, pc)
        assert x0.b_norm_squared() == pytest.approx(1.0)
        lifted = hierarchy.interp @ coarse_smallest_eigenvector(coarse)
        cos = abs(x0.xhat @ lifted) / (np.linalg.norm(x0.xhat) * np.linalg.norm(lifted))
        assert cos == pytest.approx(1.0)
        np.testing.assert_allclose(x0.x, pc.apply(x0.xhat), atol=1e-14)

    def test_lifted_coarse_vector_keeps_coarse_eigenvalue(self, fem_setup):
        hierarchy, p, _, _ = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        u0 = coarse_smallest_eigenvector(coarse)
        lam0 = rayleigh_quotient(coarse, u0)
        assert rayleigh_quotient(p, hierarchy.interp @ u0) == pytest.approx(lam0, rel=1e-12)

    def test_exact_preconditioner_start_with_identity_mass(self, fem_setup):
        hierarchy, p, _, _ = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        pc = exact_preconditioner(p.a)
        x0 = coarse_eigen_initial(hierarchy, coarse, pc)
        np.testing.assert_allclose(p.a @ x0.x, x0.xhat, atol=1e-10)
        assert x0.x @ (p.a @ x0.x) == pytest.approx(1.0)

    def test_needs_coarse_space(self):
        hierarchy = build_mesh_hierarchy(1.0, 0.125)
        p = assemble_laplacian_p1(hierarchy.fine)
        with pytest.raises(ValidationError):
            coarse_eigen_initial(hierarchy, p, identity_preconditioner(p.n))

    def test_dimension_checks(self, fem_setup):
        hierarchy, p, _, _ = fem_setup
        coarse = galerkin_coarse_pencil(hierarchy, p)
        with pytest.raises(DimensionMismatchError):
            coarse_eigen_initial(hierarchy, p, identity_preconditioner(p.n))
        with pytest.raises(DimensionMismatchError):
            coarse_eigen_initial(hierarchy, coarse, identity_preconditioner(p.n + 1))
