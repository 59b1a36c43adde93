"""Portrait of process-matrix sparsity in two operator bases.

A two-qubit memory subject to independent bit flips has a 16x16 process
matrix. In the natural basis its support is spread over many entries, but in
the rotated basis built from the ideal channel's SVD almost all of the weight
collapses into the single (1,1) entry -- the structure the sparsity-seeking
estimators exploit. This script prints the magnitude grids for the ideal
memory and for bit-flip probabilities 0.05 and 0.2, plus summary statistics.

Run:  python3 demos/sparsity_portrait.py
"""

import numpy as np

from sparseqpt import (
    bitflip_channel,
    ideal_svd_basis,
    natural_basis,
    process_matrix,
)


def portrait(p_bf: float, basis, label: str) -> None:
    X = process_matrix(bitflip_channel(2, p_bf), basis)
    mags = np.abs(X.mat)
    big = mags >= 1e-3
    print(f"\n--- p_bf = {p_bf:g}, {label} basis ---")
    print(f"entries with |X_ab| >= 1e-3 : {int(big.sum())} of 256")
    print(f"largest entry               : {mags.max():.4f} at {np.unravel_index(mags.argmax(), mags.shape)}")
    print(f"fraction of Frobenius mass in top entry: {mags.max()**2 / np.sum(mags**2):.4f}")
    with np.printoptions(precision=2, suppress=True, linewidth=200):
        print(np.where(mags < 5e-3, 0.0, mags))


def main() -> None:
    nat = natural_basis(4)
    ib = ideal_svd_basis(np.eye(4, dtype=complex))
    for p in (0.0, 0.05, 0.2):
        portrait(p, nat, "natural")
        portrait(p, ib, "ideal-SVD")
    print(
        "\nNote how the ideal memory has 16 unit entries in the natural basis"
        " but a single entry of 4 in the rotated basis; weak noise perturbs"
        " that picture only slightly ('almost sparse')."
    )


if __name__ == "__main__":
    main()
