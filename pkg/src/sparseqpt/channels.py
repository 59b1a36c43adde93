"""CPTP channels in Kraus form, their process-matrix representations, and
distance/fidelity metrics.

A channel with Kraus operators {K_i} acts as rho → Σ K_i rho K_i†. In a
fixed orthonormal operator basis {Γ_a} the same action reads
rho → Σ X_ab Γ_a rho Γ_b† with the Hermitian PSD process matrix
X = Σ_i c_i c_i†, c_i the coefficient vector of K_i. Trace preservation is
the affine equality Σ X_ab Γ_b† Γ_a = I.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .basis import OperatorBasis, coefficient_vector, natural_basis, transition_matrix
from .linalg import hermitian_part, kron, require_hermitian, vec

__all__ = [
    "KrausChannel",
    "ProcessMatrix",
    "unitary_channel",
    "bitflip_channel",
    "process_matrix",
    "apply_kraus",
    "apply",
    "change_basis",
    "trace_preserving_map",
    "process_fidelity",
    "rms_distance",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

# Tolerances for validating numerically produced process matrices.
PSD_EIG_TOL = -1e-8
TP_EQUALITY_TOL = 1e-8


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by Kraus operators with Σ K_i† K_i = I."""

    n_s: int
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if not self.kraus:
            raise ValueError("need at least one Kraus operator")
        for K in self.kraus:
            if K.shape != (self.n_s, self.n_s):
                raise ValueError("Kraus operator has wrong shape")
        total = sum(K.conj().T @ K for K in self.kraus)
        if np.linalg.norm(total - np.eye(self.n_s)) > 1e-10:
            raise ValueError("Kraus operators are not trace preserving")


@dataclass(frozen=True)
class ProcessMatrix:
    """Hermitian n_s²×n_s² process matrix tied to an operator basis."""

    basis: OperatorBasis
    mat: np.ndarray

    def __post_init__(self) -> None:
        d = self.basis.dim
        if self.mat.shape != (d, d):
            raise ValueError(f"process matrix must be {d}x{d}")

    def validate(self) -> None:
        """Check Hermiticity, PSD-ness, the trace-preserving equality, and
        Tr X = n_s within the module tolerances."""
        X = require_hermitian(self.mat)
        w = np.linalg.eigvalsh(X)
        if w.min() < PSD_EIG_TOL:
            raise ValueError(f"process matrix not PSD: min eigenvalue {w.min():.3e}")
        resid = trace_preserving_residual(self)
        if resid > TP_EQUALITY_TOL:
            raise ValueError(f"trace-preserving equality violated: {resid:.3e}")
        if abs(np.trace(X).real - self.basis.n_s) > 1e-6:
            raise ValueError("process matrix trace differs from Hilbert dimension")


def unitary_channel(U: np.ndarray) -> KrausChannel:
    """Channel rho → U rho U† with the single Kraus operator U."""
    U = np.asarray(U, dtype=complex)
    if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > 1e-10:
        raise ValueError("matrix is not unitary within tolerance")
    return KrausChannel(n_s=U.shape[0], kraus=(U,))


def bitflip_channel(qubits: int, p_bf: float) -> KrausChannel:
    """Independent bit-flip noise on each of ``qubits`` qubits.

    Per qubit the Kraus pair is {√(1−p)·I, √p·σ_x}; the q-qubit channel is
    their tensor product, 2^q operators in total.
    """
    if not 0.0 <= p_bf <= 1.0:
        raise ValueError("flip probability must lie in [0, 1]")
    if qubits < 1:
        raise ValueError("need at least one qubit")
    single = (np.sqrt(1.0 - p_bf) * np.eye(2, dtype=complex), np.sqrt(p_bf) * SIGMA_X)
    ops = list(single)
    for _ in range(qubits - 1):
        ops = [kron(A, B) for A in ops for B in single]
    return KrausChannel(n_s=2**qubits, kraus=tuple(ops))


def process_matrix(ch: KrausChannel, basis: OperatorBasis) -> ProcessMatrix:
    """Process matrix X = Σ_i c_i c_i† of a Kraus channel in ``basis``."""
    if ch.n_s != basis.n_s:
        raise ValueError("channel and basis dimensions differ")
    X = np.zeros((basis.dim, basis.dim), dtype=complex)
    for K in ch.kraus:
        c = coefficient_vector(K, basis)
        X += np.outer(c, c.conj())
    return ProcessMatrix(basis=basis, mat=hermitian_part(X))


def apply_kraus(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Direct Kraus action Σ K_i rho K_i†."""
    return sum(K @ rho @ K.conj().T for K in ch.kraus)


def apply(X: ProcessMatrix, rho: np.ndarray) -> np.ndarray:
    """Channel action Σ X_ab Γ_a rho Γ_b† on a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    n = X.basis.n_s
    if rho.shape != (n, n):
        raise ValueError("state has wrong shape")
    require_hermitian(rho, rtol=1e-8)
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ValueError("state must have unit trace")
    if np.linalg.eigvalsh(hermitian_part(rho)).min() < -1e-8:
        raise ValueError("state must be positive semidefinite")
    # Σ_ab X_ab Γ_a rho Γ_b† = Σ_b (Σ_a X_ab Γ_a) rho Γ_b†
    gammas = X.basis.gammas
    out = np.zeros((n, n), dtype=complex)
    for b_idx in range(X.basis.dim):
        left = sum(X.mat[a_idx, b_idx] * gammas[a_idx] for a_idx in range(X.basis.dim))
        out += left @ rho @ gammas[b_idx].conj().T
    return out


def change_basis(X: ProcessMatrix, to: OperatorBasis) -> ProcessMatrix:
    """Re-express a process matrix in another orthonormal basis: X' = S† X S
    with the unitary overlap S. Channel action and spectrum are preserved."""
    S = transition_matrix(X.basis, to)
    return ProcessMatrix(basis=to, mat=hermitian_part(S.conj().T @ X.mat @ S))


def trace_preserving_map(basis: OperatorBasis) -> np.ndarray:
    """Matrix T of the linear map vec(X) → vec(Σ X_ab Γ_b† Γ_a).

    Trace preservation of X is T·vec(X) = vec(I). Shape (n_s², n_s⁴),
    column-major index ordering throughout.
    """
    d = basis.dim
    T = np.empty((basis.n_s * basis.n_s, d * d), dtype=complex)
    for b_idx in range(d):
        Gb = basis.gammas[b_idx].conj().T
        for a_idx in range(d):
            T[:, a_idx + d * b_idx] = vec(Gb @ basis.gammas[a_idx])
    return T


def trace_preserving_residual(X: ProcessMatrix) -> float:
    """Frobenius norm of Σ X_ab Γ_b† Γ_a − I."""
    T = trace_preserving_map(X.basis)
    r = T @ vec(X.mat) - vec(np.eye(X.basis.n_s, dtype=complex))
    return float(np.linalg.norm(r))


def process_fidelity(X: ProcessMatrix, U: np.ndarray) -> float:
    """Overlap u† X u / n_s² with u = vec(U), X taken in the natural basis.

    Equals 1 for the channel rho → U rho U† and (1−p)² for the two-qubit
    bit-flip channel against the identity.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (X.basis.n_s, X.basis.n_s):
        raise ValueError("unitary has wrong shape")
    X_nat = change_basis(X, natural_basis(X.basis.n_s))
    u = vec(U)
    val = np.vdot(u, X_nat.mat @ u).real / X.basis.dim
    return float(np.clip(val, 0.0, 1.0))


def rms_distance(X1: ProcessMatrix, X2: ProcessMatrix) -> float:
    """RMS matrix distance (1/d)·‖X1 − X2‖_F with d = n_s² the dimension of
    the process matrices. Both arguments must share a basis."""
    if not _same_basis(X1.basis, X2.basis):
        raise ValueError("process matrices are expressed in different bases")
    delta = X1.mat - X2.mat
    return float(np.linalg.norm(delta) / X1.basis.dim)


def _same_basis(b1: OperatorBasis, b2: OperatorBasis) -> bool:
    if b1 is b2:
        return True
    return b1.n_s == b2.n_s and np.allclose(b1.stack, b2.stack, atol=1e-12)


def process_matrix_to_json(X: ProcessMatrix) -> str:
    """Serialize as {basis label, n_S, X as nested [re, im]}."""
    payload = {
        "basis": X.basis.label,
        "n_S": X.basis.n_s,
        "X": [[[float(z.real), float(z.imag)] for z in row] for row in X.mat],
    }
    return json.dumps(payload)
