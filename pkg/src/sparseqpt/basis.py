"""Orthonormal operator bases for n×n complex matrices.

Two families are provided:

* the natural basis, whose elements each carry a single unit entry, ordered
  column-major so the coefficient vector of any matrix equals its
  column-stacking vectorization;
* the ideal/SVD basis of a unitary U, a rotation of the natural basis whose
  first element is U/√n. In it the process matrix of the channel
  rho → U rho U† is maximally sparse: a single entry of value n at (0, 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import unvec, vec

__all__ = [
    "OperatorBasis",
    "natural_basis",
    "ideal_svd_basis",
    "coefficient_vector",
    "transition_matrix",
    "basis_to_json",
    "basis_from_json",
]

GRAM_TOL_CONSTRUCT = 1e-12
GRAM_TOL_VALIDATE = 1e-10


@dataclass(frozen=True)
class OperatorBasis:
    """An ordered orthonormal set of n_s×n_s complex matrices.

    ``stack`` caches the (n_s², n_s²) matrix whose columns are the vectorized
    basis elements; orthonormality makes it unitary.
    """

    n_s: int
    gammas: tuple[np.ndarray, ...]
    label: str = "custom"
    stack: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_s < 2:
            raise ValueError("Hilbert dimension must be at least 2")
        d = self.n_s * self.n_s
        if len(self.gammas) != d:
            raise ValueError(f"expected {d} basis elements, got {len(self.gammas)}")
        for G in self.gammas:
            if G.shape != (self.n_s, self.n_s):
                raise ValueError("basis element has wrong shape")
        stack = np.column_stack([vec(G) for G in self.gammas])
        object.__setattr__(self, "stack", stack)

    @property
    def dim(self) -> int:
        """Number of basis elements, n_s²."""
        return self.n_s * self.n_s

    def gram(self) -> np.ndarray:
        """Pairwise overlap matrix Tr(Γ_i† Γ_j); identity for a valid basis."""
        return self.stack.conj().T @ self.stack

    def validate(self, tol: float = GRAM_TOL_VALIDATE) -> None:
        err = np.max(np.abs(self.gram() - np.eye(self.dim)))
        if err > tol:
            raise ValueError(f"basis is not orthonormal: Gram deviation {err:.3e}")

    def reconstruct(self, coeffs: np.ndarray) -> np.ndarray:
        """Matrix Σ c_i Γ_i from a coefficient vector."""
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.size != self.dim:
            raise ValueError("coefficient vector has wrong length")
        return unvec(self.stack @ coeffs, self.n_s, self.n_s)


def natural_basis(n_s: int) -> OperatorBasis:
    """Basis of single-entry matrices e_i e_j^T, ordered column-major so that
    coefficient vectors coincide with column-stacking vectorization."""
    if n_s < 2:
        raise ValueError("Hilbert dimension must be at least 2")
    gammas = []
    for j in range(n_s):
        for i in range(n_s):
            G = np.zeros((n_s, n_s), dtype=complex)
            G[i, j] = 1.0
            gammas.append(G)
    return OperatorBasis(n_s=n_s, gammas=tuple(gammas), label="natural")


def _require_unitary(U: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError("expected a square matrix")
    if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > tol:
        raise ValueError("matrix is not unitary within tolerance")
    return U


def _householder_completion(v1: np.ndarray) -> np.ndarray:
    """Deterministic unitary whose first column is the unit vector v1.

    Built from the Householder reflection sending v1 to a phase multiple of
    e_1, with the stable sign choice, then re-phasing the first column.
    """
    d = v1.size
    x0 = v1[0]
    mu = -x0 / np.abs(x0) if np.abs(x0) > 1e-12 else -1.0
    w = v1.copy()
    w[0] -= mu
    nw2 = np.vdot(w, w).real
    H = np.eye(d, dtype=complex) - (2.0 / nw2) * np.outer(w, w.conj())
    V = H.copy()
    V[:, 0] = H[:, 0] * mu  # H e_1 = conj(mu)·v1, so re-phase to v1 exactly
    return V


def ideal_svd_basis(U: np.ndarray) -> OperatorBasis:
    """Rotate the natural basis so the first element is U/√n_s.

    The rank-1 process matrix of the unitary channel rho → U rho U† then
    collapses to a single entry of value n_s at position (0, 0). The rotation
    is completed deterministically by a Householder reflection; the ordering
    of the remaining elements is a convention of this implementation.
    """
    U = _require_unitary(U)
    n_s = U.shape[0]
    v1 = vec(U) / np.sqrt(n_s)
    V = _householder_completion(v1)
    gammas = tuple(unvec(V[:, k], n_s, n_s) for k in range(n_s * n_s))
    b = OperatorBasis(n_s=n_s, gammas=gammas, label="ideal-svd")
    b.validate(GRAM_TOL_CONSTRUCT * b.dim)
    return b


def coefficient_vector(A: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """Expansion coefficients c_i = Tr(Γ_i† A); Σ c_i Γ_i reconstructs A."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (basis.n_s, basis.n_s):
        raise ValueError(f"matrix shape {A.shape} does not match basis dimension {basis.n_s}")
    return basis.stack.conj().T @ vec(A)


def transition_matrix(src: OperatorBasis, dst: OperatorBasis) -> np.ndarray:
    """Unitary overlap matrix S with S_ij = Tr(Γ_i† Γ'_j).

    A coefficient vector c in ``src`` becomes S† c in ``dst``; a process
    matrix X becomes S† X S.
    """
    if src.n_s != dst.n_s:
        raise ValueError("bases act on different Hilbert dimensions")
    return src.stack.conj().T @ dst.stack


def _matrix_to_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _matrix_from_json(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def basis_to_json(basis: OperatorBasis) -> str:
    """Serialize as {label, n_S, gammas} with entries as [re, im] pairs."""
    payload = {
        "label": basis.label,
        "n_S": basis.n_s,
        "gammas": [_matrix_to_json(G) for G in basis.gammas],
    }
    return json.dumps(payload)


def basis_from_json(text: str) -> OperatorBasis:
    """Parse the :func:`basis_to_json` format and validate orthonormality."""
    payload = json.loads(text)
    gammas = tuple(_matrix_from_json(G) for G in payload["gammas"])
    b = OperatorBasis(n_s=int(payload["n_S"]), gammas=gammas, label=payload["label"])
    b.validate()
    return b
