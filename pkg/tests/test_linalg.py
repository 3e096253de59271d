import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exceptions import (
    DegenerateBasisError,
    DenseSizeLimitExceededError,
    DimensionMismatchError,
    DomainError,
    InvalidFileError,
    MatrixError,
)
from src.linalg import (
    MatrixPencil,
    SpdMatrix,
    dense_generalized_eig,
    euclidean_gradient,
    extremal_pencil_eigs,
    rayleigh_quotient,
    rayleigh_ritz,
    read_spd_matrix,
    read_vector,
    residual,
    weighted_inner,
    weighted_norm,
    write_sparse_matrix,
    write_spd_matrix,
    write_vector,
)
from tests.conftest import diagonal_pencil, random_pencil, random_spd


class TestSpdMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(MatrixError):
            SpdMatrix(np.ones((2, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(MatrixError, match="symmetric"):
            SpdMatrix(np.array([[2.0, 1.0], [0.0, 2.0]]))

    def test_duplicates_are_summed(self):
        coo = sp.coo_matrix(([1.0, 1.0, 3.0], ([0, 0, 1], [0, 0, 1])), shape=(2, 2))
        assert SpdMatrix(coo).toarray().tolist() == [[2.0, 0.0], [0.0, 3.0]]

    def test_matvec_and_submatrix(self, rng):
        dense = random_spd(rng, 6)
        a = SpdMatrix.from_dense(dense)
        x = rng.standard_normal(6)
        np.testing.assert_allclose(a.matvec(x), dense @ x)
        index = np.array([1, 3, 4])
        np.testing.assert_allclose(a.submatrix(index).toarray(), dense[np.ix_(index, index)])

    def test_matvec_dimension(self):
        with pytest.raises(DimensionMismatchError):
            SpdMatrix.identity(3).matvec(np.ones(4))

    def test_scaled_requires_positive(self):
        with pytest.raises(DomainError):
            SpdMatrix.identity(2).scaled(0.0)

    def test_pencil_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            MatrixPencil(SpdMatrix.identity(2), SpdMatrix.identity(3))


class TestKernels:
    def test_rayleigh_of_eigenvector(self):
        p = diagonal_pencil([1.0, 2.0, 5.0])
        assert rayleigh_quotient(p, [0.0, 3.0, 0.0]) == pytest.approx(2.0)

    def test_rayleigh_zero_vector(self, small_pencil):
        with pytest.raises(DomainError):
            rayleigh_quotient(small_pencil, np.zeros(small_pencil.n))

    def test_rayleigh_dimension(self, small_pencil):
        with pytest.raises(DimensionMismatchError):
            rayleigh_quotient(small_pencil, np.ones(small_pencil.n + 1))

    def test_gradient_matches_finite_difference(self, small_pencil, rng):
        x = rng.standard_normal(small_pencil.n)
        g = euclidean_gradient(small_pencil, x)
        e = rng.standard_normal(small_pencil.n)
        step = 1e-6
        fd = (rayleigh_quotient(small_pencil, x + step * e) - rayleigh_quotient(small_pencil, x - step * e)) / (2 * step)
        assert g @ e == pytest.approx(fd, rel=1e-6)
        assert abs(g @ x) < 1e-10 * np.linalg.norm(g) * np.linalg.norm(x)

    def test_residual_vanishes_at_eigenpair(self):
        p = diagonal_pencil([1.0, 2.0])
        assert np.allclose(residual(p, [1.0, 0.0], 1.0), 0.0)

    def test_weighted_inner(self, rng):
        w = SpdMatrix.from_dense(random_spd(rng, 4))
        x, y = rng.standard_normal(4), rng.standard_normal(4)
        assert weighted_inner(x, y, w) == pytest.approx(x @ w.toarray() @ y)
        assert weighted_norm(x) == pytest.approx(np.linalg.norm(x))

    @settings(max_examples=25, deadline=None)
    @given(scale=st.floats(min_value=1e-3, max_value=1e3), seed=st.integers(0, 1000))
    def test_rayleigh_scale_invariant(self, scale, seed):
        rng = np.random.default_rng(seed)
        p = random_pencil(rng, 5)
        x = rng.standard_normal(5)
        assert rayleigh_quotient(p, scale * x) == pytest.approx(rayleigh_quotient(p, x), rel=1e-12)
        assert rayleigh_quotient(p.scaled(scale), x) == pytest.approx(rayleigh_quotient(p, x), rel=1e-12)


class TestRayleighRitz:
    def test_full_space_gives_lambda1(self, small_pencil):
        values, _ = dense_generalized_eig(small_pencil)
        result = rayleigh_ritz(list(np.eye(small_pencil.n)), small_pencil)
        assert result.value == pytest.approx(values[0], rel=1e-12)
        assert result.rank == small_pencil.n

    def test_coefficients_reproduce_vector(self, small_pencil, rng):
        basis = [rng.standard_normal(small_pencil.n) for _ in range(3)]
        result = rayleigh_ritz(basis, small_pencil)
        np.testing.assert_allclose(np.column_stack(basis) @ result.coeffs, result.vector, atol=1e-12)
        assert rayleigh_quotient(small_pencil, result.vector) == pytest.approx(result.value, rel=1e-12)
        assert result.vector @ (small_pencil.m @ result.vector) == pytest.approx(1.0)

    def test_ritz_value_below_every_basis_vector(self, small_pencil, rng):
        basis = [rng.standard_normal(small_pencil.n) for _ in range(2)]
        result = rayleigh_ritz(basis, small_pencil)
        assert result.value <= min(rayleigh_quotient(small_pencil, b) for b in basis) + 1e-12

    def test_dependent_column_dropped(self, small_pencil, rng):
        x = rng.standard_normal(small_pencil.n)
        result = rayleigh_ritz([x, 2.0 * x], small_pencil)
        assert result.rank == 1
        assert result.value == pytest.approx(rayleigh_quotient(small_pencil, x))

    def test_sign_of_leading_coefficient(self, small_pencil, rng):
        basis = [rng.standard_normal(small_pencil.n) for _ in range(3)]
        assert rayleigh_ritz(basis, small_pencil).coeffs[0] >= 0.0

    def test_degenerate(self, small_pencil):
        with pytest.raises(DegenerateBasisError):
            rayleigh_ritz([np.zeros(small_pencil.n)], small_pencil)

    def test_empty_basis(self, small_pencil):
        with pytest.raises(DomainError):
            rayleigh_ritz([], small_pencil)


class TestDenseOracle:
    def test_matches_scipy(self, small_pencil):
        values, vectors = dense_generalized_eig(small_pencil)
        expected = sla.eigh(small_pencil.a.toarray(), small_pencil.m.toarray(), eigvals_only=True)
        np.testing.assert_allclose(values, expected, rtol=1e-12)
        m = small_pencil.m.toarray()
        np.testing.assert_allclose(vectors.T @ m @ vectors, np.eye(small_pencil.n), atol=1e-10)

    def test_size_limit(self, small_pencil):
        with pytest.raises(DenseSizeLimitExceededError):
            dense_generalized_eig(small_pencil, max_dim=4)

    def test_indefinite_mass(self):
        p = MatrixPencil(SpdMatrix.identity(2), SpdMatrix(np.diag([1.0, -1.0])))
        with pytest.raises(MatrixError):
            dense_generalized_eig(p)


class TestLanczos:
    def test_brackets_from_inside(self, rng):
        a_dense = random_spd(rng, 30, cond=100.0)
        b_dense = random_spd(rng, 30, cond=5.0)
        nu = sla.eigh(a_dense, b_dense, eigvals_only=True)
        b_inv = np.linalg.inv(b_dense)
        est = extremal_pencil_eigs(SpdMatrix.from_dense(a_dense), lambda r: b_inv @ r, iters=10)
        assert nu[0] - 1e-10 <= est.nu_min
        assert est.nu_max <= nu[-1] + 1e-10
        assert est.kappa <= nu[-1] / nu[0] + 1e-8

    def test_exact_after_n_steps(self, rng):
        a_dense = random_spd(rng, 8)
        est = extremal_pencil_eigs(SpdMatrix.from_dense(a_dense), lambda r: r.copy(), iters=50)
        values = np.linalg.eigvalsh(a_dense)
        assert est.iterations <= 8
        assert est.nu_min == pytest.approx(values[0], rel=1e-8)
        assert est.nu_max == pytest.approx(values[-1], rel=1e-8)

    def test_breakdown_on_invariant_start(self):
        a = SpdMatrix(sp.diags([1.0, 2.0, 3.0]).tocsr())
        est = extremal_pencil_eigs(a, lambda r: r.copy(), iters=3, start=np.array([1.0, 0.0, 0.0]))
        assert est.breakdown
        assert est.nu_min == pytest.approx(1.0)

    def test_rejects_zero_steps(self):
        with pytest.raises(DomainError):
            extremal_pencil_eigs(SpdMatrix.identity(3), lambda r: r, iters=0)


class TestMatrixMarket:
    def test_matrix_round_trip(self, tmp_path, small_pencil):
        path = str(tmp_path / "a.mtx")
        write_spd_matrix(path, small_pencil.a, comment="test")
        np.testing.assert_allclose(read_spd_matrix(path).toarray(), small_pencil.a.toarray(), rtol=1e-15)

    def test_rectangular_writer(self, tmp_path):
        path = tmp_path / "p.mtx"
        write_sparse_matrix(str(path), sp.csr_matrix(np.array([[1.0, 0.0, 0.5]])))
        text = path.read_text()
        assert "general" in text.splitlines()[0]

    def test_vector_round_trip(self, tmp_path, rng):
        path = str(tmp_path / "x.txt")
        x = rng.standard_normal(5)
        write_vector(path, x)
        np.testing.assert_array_equal(read_vector(path, 5), x)
        with pytest.raises(DimensionMismatchError):
            read_vector(path, 6)

    def test_missing_and_wrong_extension(self, tmp_path):
        with pytest.raises(InvalidFileError):
            read_spd_matrix(str(tmp_path / "none.mtx"))
        other = tmp_path / "a.csv"
        other.write_text("1\n")
        with pytest.raises(InvalidFileError):
            read_spd_matrix(str(other))

    def test_not_matrix_market(self, tmp_path):
        bad = tmp_path / "bad.mtx"
        bad.write_text("this is not a matrix\n")
        with pytest.raises(InvalidFileError):
            read_spd_matrix(str(bad))
