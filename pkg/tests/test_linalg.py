import numpy as np
import pytest

from sparseqpt.linalg import (
    hermitian_eig,
    kron,
    psd_project,
    svd,
    unvec,
    vec,
)
from conftest import random_hermitian


class TestHermitianEig:
    def test_identity(self):
        eig = hermitian_eig(np.eye(4, dtype=complex))
        assert np.allclose(eig.eigenvalues, np.ones(4))

    def test_diagonal_descending(self):
        eig = hermitian_eig(np.diag([3.0, -1.0]).astype(complex))
        assert np.allclose(eig.eigenvalues, [3.0, -1.0])
        # eigenvectors are signed permutations of identity columns
        assert np.allclose(np.abs(eig.eigenvectors), np.eye(2))

    def test_reconstruction(self, rng):
        A = random_hermitian(rng, 16)
        eig = hermitian_eig(A)
        assert np.linalg.norm(eig.reconstruct() - A) <= 1e-10 * np.linalg.norm(A)

    def test_unitary_eigenvectors(self, rng):
        Q = hermitian_eig(random_hermitian(rng, 8)).eigenvectors
        assert np.max(np.abs(Q.conj().T @ Q - np.eye(8))) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitian_eig(np.zeros((2, 3)))

    def test_deterministic_phases(self, rng):
        A = random_hermitian(rng, 6)
        e1 = hermitian_eig(A)
        e2 = hermitian_eig(A.copy())
        assert np.array_equal(e1.eigenvectors, e2.eigenvectors)


class TestSvd:
    def test_rank_one_projector(self, rng):
        # xx† with x†x = 4 has singular values (4, 0, 0, ...)
        x = rng.normal(size=8) + 1j * rng.normal(size=8)
        x *= 2.0 / np.linalg.norm(x)
        _, s, _ = svd(np.outer(x, x.conj()))
        assert abs(s[0] - 4.0) < 1e-10
        assert np.all(s[1:] < 1e-10)

    def test_zero_matrix(self):
        _, s, _ = svd(np.zeros((3, 3)))
        assert np.all(s == 0)

    def test_reconstruction(self, rng):
        A = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        U, s, V = svd(A)
        assert np.linalg.norm((U * s) @ V.conj().T - A) <= 1e-10 * np.linalg.norm(A)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            svd(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_x_tensor_identity(self):
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        K = kron(X, np.eye(2))
        expected = np.zeros((4, 4))
        expected[:2, 2:] = np.eye(2)
        expected[2:, :2] = np.eye(2)
        assert np.array_equal(K, expected)

    def test_mixed_product(self, rng):
        A, B, C, D = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = kron(A, B) @ kron(C, D)
        rhs = kron(A @ C, B @ D)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_shape_law(self, rng):
        A = rng.normal(size=(2, 3))
        B = rng.normal(size=(5, 4))
        assert kron(A, B).shape == (10, 12)


class TestVec:
    def test_column_major(self):
        E = np.zeros((2, 2))
        E[0, 0] = 1.0
        assert np.array_equal(vec(E), [1, 0, 0, 0])
        # second column of the matrix comes after the first
        A = np.array([[1, 3], [2, 4]])
        assert np.array_equal(vec(A), [1, 2, 3, 4])

    def test_linear(self, rng):
        A = rng.normal(size=(3, 3))
        B = rng.normal(size=(3, 3))
        c = 2.5 - 1j
        assert np.allclose(vec(A + c * B), vec(A) + c * vec(B))

    def test_round_trip(self, rng):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.array_equal(unvec(vec(A), 4, 4), A)

    def test_unvec_length_mismatch(self):
        with pytest.raises(ValueError):
            unvec(np.zeros(5), 2, 2)


class TestPsdProject:
    def test_psd_unchanged(self, rng):
        A = random_hermitian(rng, 5)
        P = A @ A.conj().T
        assert np.max(np.abs(psd_project(P) - P)) < 1e-10

    def test_clips_negative_eigenvalues(self):
        out = psd_project(np.diag([2.0, -3.0]).astype(complex))
        assert np.allclose(out, np.diag([2.0, 0.0]))

    def test_sampled_optimality(self, rng):
        # the projection is Frobenius-closer to A than any sampled PSD matrix
        A = random_hermitian(rng, 4)
        best = np.linalg.norm(A - psd_project(A))
        for _ in range(100):
            B = random_hermitian(rng, 4)
            P = B @ B.conj().T
            assert best <= np.linalg.norm(A - P) + 1e-12

    def test_idempotent(self, rng):
        A = random_hermitian(rng, 6)
        P = psd_project(A)
        assert np.max(np.abs(psd_project(P) - P)) < 1e-10
