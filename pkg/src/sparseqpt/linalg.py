"""Dense complex linear-algebra primitives: Hermitian eigendecomposition,
SVD with deterministic phase fixing, Kronecker products, column-major
vectorization, and projection onto the positive-semidefinite cone.

Everything operates on plain ``numpy`` arrays of dtype complex and is pure:
inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HermEig",
    "hermitian_part",
    "require_hermitian",
    "hermitian_eig",
    "svd",
    "kron",
    "vec",
    "unvec",
    "psd_project",
]

# Relative Frobenius tolerance for "is Hermitian" checks.
HERMITIAN_RTOL = 1e-10


def _as_complex(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise ValueError("matrix contains non-finite entries")
    return A


def hermitian_part(A: np.ndarray) -> np.ndarray:
    """Return (A + A†)/2."""
    A = _as_complex(A)
    return (A + A.conj().T) / 2


def require_hermitian(A: np.ndarray, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate that A is square and Hermitian within ``rtol``, relative to ‖A‖_F.

    Returns the exactly symmetrized matrix.
    """
    A = _as_complex(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(np.linalg.norm(A), 1e-300)
    if np.linalg.norm(A - A.conj().T) > rtol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return hermitian_part(A)


def _fix_column_phases(Q: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Multiply each column by a unit phase so its first significant entry is
    real and positive. Makes eigen/singular vector bases reproducible."""
    Q = Q.copy()
    for k in range(Q.shape[1]):
        col = Q[:, k]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size:
            pivot = col[idx[0]]
            Q[:, k] = col * (np.abs(pivot) / pivot)
    return Q


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and sorted descending; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        Q = self.eigenvectors
        return (Q * self.eigenvalues) @ Q.conj().T


def hermitian_eig(A: np.ndarray) -> HermEig:
    """Eigendecomposition of a Hermitian matrix with descending eigenvalues
    and a deterministic eigenvector phase convention."""
    A = require_hermitian(A)
    w, Q = np.linalg.eigh(A)
    order = np.argsort(w)[::-1]
    w = w[order]
    Q = _fix_column_phases(Q[:, order])
    return HermEig(eigenvalues=w, eigenvectors=Q)


def svd(A: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition A = U·diag(s)·V† with s descending and a
    deterministic phase convention on the singular vector pairs.

    Returns ``(U, s, V)`` where V holds right singular vectors as columns.
    """
    A = _as_complex(A)
    U, s, Vh = np.linalg.svd(A)
    # Phase-fix each U column; compensate on the matching Vh row so the
    # product is unchanged.
    for k in range(min(A.shape)):
        col = U[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            pivot = col[idx[0]]
            phase = np.abs(pivot) / pivot
            U[:, k] = col * phase
            Vh[k, :] = Vh[k, :] * np.conj(phase)
    return U, s, Vh.conj().T


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product A⊗B."""
    return np.kron(_as_complex(A), _as_complex(B))


def vec(A: np.ndarray) -> np.ndarray:
    """Column-major (column-stacking) vectorization of A."""
    return _as_complex(A).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=complex)
    if v.size != rows * cols:
        raise ValueError(f"cannot reshape {v.size} entries into {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def psd_project(A: np.ndarray) -> np.ndarray:
    """Frobenius-nearest positive-semidefinite matrix to a Hermitian A:
    clip negative eigenvalues to zero and reconstruct."""
    eig = hermitian_eig(A)
    w = np.maximum(eig.eigenvalues, 0.0)
    Q = eig.eigenvectors
    return hermitian_part((Q * w) @ Q.conj().T)
