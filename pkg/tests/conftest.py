import numpy as np
import pytest

from sparseqpt.basis import ideal_svd_basis, natural_basis


@pytest.fixture(scope="session")
def natural4():
    return natural_basis(4)


@pytest.fixture(scope="session")
def ideal4():
    return ideal_svd_basis(np.eye(4, dtype=complex))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def random_unitary(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_density(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


def random_kraus_channel(rng, n, n_ops=2):
    from sparseqpt.channels import KrausChannel

    ops = [rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) for _ in range(n_ops)]
    S = sum(a.conj().T @ a for a in ops)
    w, Q = np.linalg.eigh(S)
    S_inv_half = (Q * (1.0 / np.sqrt(w))) @ Q.conj().T
    return KrausChannel(n_s=n, kraus=tuple(a @ S_inv_half for a in ops))
