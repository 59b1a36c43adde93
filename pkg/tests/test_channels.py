import numpy as np
import pytest

from sparseqpt.channels import (
    apply,
    apply_kraus,
    bitflip_channel,
    change_basis,
    process_fidelity,
    process_matrix,
    rms_distance,
    unitary_channel,
)
from conftest import random_density, random_kraus_channel, random_unitary


def closed_form_bitflip_rms(p):
    """Actual-vs-ideal RMS distance for the two-qubit bit-flip channel.

    The Kraus operators are mutually orthogonal (scaled Pauli products), so
    the natural-basis process matrices are simultaneous spectral decompositions
    and the distance reduces to a weight computation:
    (1/16)*4*sqrt(((1-p)^2-1)^2 + 2 p^2 (1-p)^2 + p^4).
    """
    w1, w2, w4 = (1 - p) ** 2, p * (1 - p), p**2
    return 0.25 * np.sqrt((w1 - 1) ** 2 + 2 * w2**2 + w4**2)


def test_unitary_channel_single_kraus():
    ch = unitary_channel(np.eye(4, dtype=complex))
    assert len(ch.kraus) == 1
    assert np.array_equal(ch.kraus[0], np.eye(4))


def test_unitary_channel_action(rng):
    U = random_unitary(rng, 4)
    ch = unitary_channel(U)
    rho = random_density(rng, 4)
    assert np.allclose(apply_kraus(ch, rho), U @ rho @ U.conj().T)


def test_unitary_channel_rejects_non_unitary():
    with pytest.raises(ValueError):
        unitary_channel(2 * np.eye(2))


def test_unitary_process_matrix_rank_one(rng, natural4):
    X = process_matrix(unitary_channel(random_unitary(rng, 4)), natural4)
    w = np.linalg.eigvalsh(X.mat)
    assert abs(np.trace(X.mat).real - 4.0) < 1e-10
    assert abs(w[-1] - 4.0) < 1e-10
    assert np.max(np.abs(w[:-1])) < 1e-10


def test_bitflip_zero_probability_is_identity(natural4):
    ch = bitflip_channel(2, 0.0)
    X = process_matrix(ch, natural4)
    X_id = process_matrix(unitary_channel(np.eye(4, dtype=complex)), natural4)
    assert np.max(np.abs(X.mat - X_id.mat)) < 1e-12


def test_bitflip_kraus_weights():
    # squared Frobenius weights expand (1-p+p)^2
    ch = bitflip_channel(2, 0.05)
    assert len(ch.kraus) == 4
    weights = sorted((np.linalg.norm(K) ** 2 / 4 for K in ch.kraus), reverse=True)
    assert np.allclose(weights, [0.9025, 0.0475, 0.0475, 0.0025])
    assert abs(sum(weights) - 1.0) < 1e-12


def test_bitflip_half_depolarizes_single_qubit():
    ch = bitflip_channel(1, 0.5)
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    assert np.allclose(apply_kraus(ch, rho0), np.eye(2) / 2)


def test_bitflip_rejects_bad_probability():
    with pytest.raises(ValueError):
        bitflip_channel(2, 1.5)


def test_single_qubit_bitflip_action(natural4):
    import sparseqpt.basis as basis_mod

    b2 = basis_mod.natural_basis(2)
    p = 0.3
    X = process_matrix(bitflip_channel(1, p), b2)
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    out = apply(X, rho0)
    assert np.allclose(out, np.diag([1 - p, p]))


def test_process_matrix_invariants(rng, natural4):
    for _ in range(5):
        X = process_matrix(random_kraus_channel(rng, 4, n_ops=3), natural4)
        X.validate()


def test_apply_matches_kraus(rng, ideal4):
    ch = random_kraus_channel(rng, 4)
    X = process_matrix(ch, ideal4)
    for _ in range(20):
        rho = random_density(rng, 4)
        out = apply(X, rho)
        assert np.max(np.abs(out - apply_kraus(ch, rho))) < 1e-10
        assert abs(np.trace(out).real - 1.0) < 1e-9
        assert np.linalg.eigvalsh((out + out.conj().T) / 2).min() > -1e-9


def test_apply_rejects_invalid_state(natural4):
    X = process_matrix(unitary_channel(np.eye(4, dtype=complex)), natural4)
    with pytest.raises(ValueError):
        apply(X, np.eye(4, dtype=complex))  # trace 4


@pytest.mark.parametrize("p,expected", [(0.05, 0.9025), (0.2, 0.64)])
def test_process_fidelity_bitflip(natural4, p, expected):
    X = process_matrix(bitflip_channel(2, p), natural4)
    assert abs(process_fidelity(X, np.eye(4)) - expected) < 1e-12


@pytest.mark.parametrize("p", [0.0, 0.05, 0.1, 0.2, 0.5])
def test_process_fidelity_matches_closed_form(natural4, p):
    X = process_matrix(bitflip_channel(2, p), natural4)
    assert abs(process_fidelity(X, np.eye(4)) - (1 - p) ** 2) < 1e-12


def test_process_fidelity_self(rng, natural4):
    U = random_unitary(rng, 4)
    X = process_matrix(unitary_channel(U), natural4)
    assert abs(process_fidelity(X, U) - 1.0) < 1e-12


def test_rms_distance_zero(natural4):
    X = process_matrix(bitflip_channel(2, 0.1), natural4)
    assert rms_distance(X, X) == 0.0


@pytest.mark.parametrize("p", [0.05, 0.2])
def test_rms_distance_matches_closed_form(ideal4, p):
    X = process_matrix(bitflip_channel(2, p), ideal4)
    X_id = process_matrix(bitflip_channel(2, 0.0), ideal4)
    assert abs(rms_distance(X, X_id) - closed_form_bitflip_rms(p)) < 1e-12


def test_rms_distance_metric_properties(rng, natural4):
    Xs = [process_matrix(random_kraus_channel(rng, 4), natural4) for _ in range(3)]
    d01 = rms_distance(Xs[0], Xs[1])
    d10 = rms_distance(Xs[1], Xs[0])
    assert d01 == d10
    d02 = rms_distance(Xs[0], Xs[2])
    d12 = rms_distance(Xs[1], Xs[2])
    assert d02 <= d01 + d12 + 1e-15


def test_rms_distance_basis_invariance(rng, natural4, ideal4):
    X1 = process_matrix(random_kraus_channel(rng, 4), natural4)
    X2 = process_matrix(random_kraus_channel(rng, 4), natural4)
    d_nat = rms_distance(X1, X2)
    d_ib = rms_distance(change_basis(X1, ideal4), change_basis(X2, ideal4))
    assert abs(d_nat - d_ib) < 1e-10


def test_rms_distance_rejects_basis_mismatch(natural4, ideal4):
    X1 = process_matrix(bitflip_channel(2, 0.1), natural4)
    X2 = process_matrix(bitflip_channel(2, 0.1), ideal4)
    with pytest.raises(ValueError):
        rms_distance(X1, X2)


def test_bitflip_x11_in_ideal_basis(ideal4):
    # first Kraus operator is 0.95*I, so the dominant coefficient is
    # Tr(K1)/sqrt(n) = 4*0.95/2 and (X)_11 = 16*0.9025/4
    X = process_matrix(bitflip_channel(2, 0.05), ideal4)
    assert abs(X.mat[0, 0].real - 3.61) < 1e-12
