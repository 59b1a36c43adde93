import numpy as np
import pytest

from sparseqpt.basis import (
    OperatorBasis,
    basis_from_json,
    basis_to_json,
    coefficient_vector,
    ideal_svd_basis,
    natural_basis,
    transition_matrix,
)
from sparseqpt.channels import apply, apply_kraus, change_basis, process_matrix, unitary_channel
from sparseqpt.linalg import vec
from conftest import random_density, random_unitary


def test_natural_basis_single_entries():
    b = natural_basis(2)
    assert len(b.gammas) == 4
    for G in b.gammas:
        assert np.count_nonzero(G) == 1
        assert G.sum() == 1.0


def test_natural_basis_matches_vec(rng):
    b = natural_basis(4)
    U = random_unitary(rng, 4)
    assert np.allclose(coefficient_vector(U, b), vec(U), atol=1e-14)


@pytest.mark.parametrize("make", [lambda: natural_basis(4), lambda: ideal_svd_basis(np.eye(4, dtype=complex))])
def test_gram_identity(make):
    b = make()
    assert np.max(np.abs(b.gram() - np.eye(16))) <= 1e-12


def test_ideal_svd_first_element_is_scaled_unitary():
    b = ideal_svd_basis(np.eye(2, dtype=complex))
    assert np.allclose(b.gammas[0], np.eye(2) / np.sqrt(2.0))


def test_ideal_svd_max_sparsity_identity(ideal4):
    X = process_matrix(unitary_channel(np.eye(4, dtype=complex)), ideal4)
    assert abs(X.mat[0, 0] - 4.0) < 1e-10
    off = X.mat.copy()
    off[0, 0] = 0.0
    assert np.max(np.abs(off)) < 1e-10


def test_ideal_svd_max_sparsity_random_unitary(rng):
    U = random_unitary(rng, 4)
    b = ideal_svd_basis(U)
    X = process_matrix(unitary_channel(U), b)
    assert abs(X.mat[0, 0] - 4.0) < 1e-10
    off = X.mat.copy()
    off[0, 0] = 0.0
    assert np.max(np.abs(off)) < 1e-10


def test_ideal_svd_rejects_non_unitary():
    with pytest.raises(ValueError):
        ideal_svd_basis(np.ones((2, 2)))


def test_coefficient_vector_of_basis_element(natural4):
    c = coefficient_vector(natural4.gammas[2], natural4)
    expected = np.zeros(16)
    expected[2] = 1.0
    assert np.allclose(c, expected)


def test_coefficient_parseval(rng, ideal4):
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    c = coefficient_vector(A, ideal4)
    assert abs(np.sum(np.abs(c) ** 2) - np.linalg.norm(A) ** 2) < 1e-10


def test_identity_coefficient_in_ideal_basis(ideal4):
    # Tr((I/2)† I) = 2, all other overlaps vanish
    c = coefficient_vector(np.eye(4, dtype=complex), ideal4)
    assert abs(c[0] - 2.0) < 1e-12
    assert np.max(np.abs(c[1:])) < 1e-12


def test_reconstruction(rng, ideal4):
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    c = coefficient_vector(A, ideal4)
    assert np.max(np.abs(ideal4.reconstruct(c) - A)) < 1e-12


def test_transition_matrix_unitary(natural4, ideal4):
    S = transition_matrix(natural4, ideal4)
    assert np.max(np.abs(S.conj().T @ S - np.eye(16))) < 1e-12


def test_change_basis_same_basis(natural4):
    X = process_matrix(unitary_channel(np.eye(4, dtype=complex)), natural4)
    X2 = change_basis(X, natural4)
    assert np.max(np.abs(X2.mat - X.mat)) < 1e-12


def test_change_basis_collapses_ideal_memory(natural4, ideal4):
    # 16 magnitude-1 entries in the natural basis become a single entry of 4
    X_nat = process_matrix(unitary_channel(np.eye(4, dtype=complex)), natural4)
    assert np.sum(np.abs(X_nat.mat) > 0.5) == 16
    X_ib = change_basis(X_nat, ideal4)
    assert abs(X_ib.mat[0, 0] - 4.0) < 1e-10
    off = X_ib.mat.copy()
    off[0, 0] = 0.0
    assert np.max(np.abs(off)) < 1e-10


def test_change_basis_round_trip(rng, natural4, ideal4):
    from conftest import random_kraus_channel

    X = process_matrix(random_kraus_channel(rng, 4), natural4)
    back = change_basis(change_basis(X, ideal4), natural4)
    assert np.max(np.abs(back.mat - X.mat)) < 1e-10


def test_change_basis_preserves_channel_action(rng, natural4, ideal4):
    from conftest import random_kraus_channel

    ch = random_kraus_channel(rng, 4)
    X_nat = process_matrix(ch, natural4)
    X_ib = change_basis(X_nat, ideal4)
    for _ in range(20):
        rho = random_density(rng, 4)
        out_nat = apply(X_nat, rho)
        out_ib = apply(X_ib, rho)
        assert np.max(np.abs(out_nat - out_ib)) < 1e-10
        assert np.max(np.abs(out_nat - apply_kraus(ch, rho))) < 1e-10


def test_change_basis_preserves_spectrum_and_trace(rng, natural4, ideal4):
    from conftest import random_kraus_channel

    X = process_matrix(random_kraus_channel(rng, 4), natural4)
    X2 = change_basis(X, ideal4)
    assert abs(np.trace(X2.mat) - np.trace(X.mat)) < 1e-10
    assert np.allclose(
        np.linalg.eigvalsh(X2.mat), np.linalg.eigvalsh(X.mat), atol=1e-10
    )


def test_json_round_trip(ideal4):
    text = basis_to_json(ideal4)
    b = basis_from_json(text)
    assert b.label == "ideal-svd"
    assert b.n_s == 4
    for G1, G2 in zip(b.gammas, ideal4.gammas):
        assert np.max(np.abs(G1 - G2)) < 1e-15


def test_json_rejects_non_orthonormal():
    bad = OperatorBasis(
        n_s=2,
        gammas=tuple(np.eye(2, dtype=complex) for _ in range(4)),
        label="broken",
    )
    with pytest.raises(ValueError):
        basis_from_json(basis_to_json(bad))


def test_dimension_validation():
    with pytest.raises(ValueError):
        natural_basis(1)
    with pytest.raises(ValueError):
        coefficient_vector(np.eye(3), natural_basis(2))
