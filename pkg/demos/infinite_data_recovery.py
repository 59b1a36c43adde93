"""Noise-free estimation: what does measurement incompleteness alone cost?

With exact outcome probabilities imposed as equality constraints, shot noise
is out of the picture and any residual estimation error is due purely to the
measurement configuration. This script compares, at bit-flip probability
0.05:

  * constrained least squares on the complete 256-pair configuration
    (sensing rank 256 -- the feasible point is unique, recovery is exact);
  * reweighted l1 minimization on the reduced 36-pair configuration
    (sensing rank 36 -- heavily underdetermined, yet the sparsity prior
    still pins down the true channel);
  * the control experiment that minimizes the Frobenius norm instead of the
    l1 norm on the same reduced data, which lands on a different, wrong
    feasible point.

Run:  python3 demos/infinite_data_recovery.py
"""

import numpy as np

from sparseqpt import (
    bitflip_channel,
    full_config,
    ideal_svd_basis,
    infinite_data_problem,
    process_matrix,
    reweighted_l1,
    rms_distance,
    solve_ls,
    solve_rms_objective,
    sub6_config,
)

P_BF = 0.05


def main() -> None:
    basis = ideal_svd_basis(np.eye(4, dtype=complex))
    X_true = process_matrix(bitflip_channel(2, P_BF), basis)

    sol_full = solve_ls(infinite_data_problem(X_true, full_config(basis), basis, mode="LS"))
    sol_sub = reweighted_l1(
        infinite_data_problem(X_true, sub6_config(basis), basis, mode="L1RW")
    )
    sol_ctrl = solve_rms_objective(
        infinite_data_problem(X_true, sub6_config(basis), basis, mode="RMSOBJ")
    )

    rows = [
        ("least squares, 256 pairs (complete)", sol_full),
        ("reweighted l1, 36 pairs (incomplete)", sol_sub),
        ("min Frobenius norm, 36 pairs (control)", sol_ctrl),
    ]
    print(f"bit-flip probability {P_BF}, infinite data\n")
    print(f"{'estimator':<42}{'RMS error':>12}{'status':>12}")
    for label, sol in rows:
        err = rms_distance(sol.X_est, X_true)
        print(f"{label:<42}{err:>12.2e}{sol.status:>12}")
    print(
        "\nThe l1 objective recovers the channel from rank-36 data because the"
        " truth is (almost) the sparsest feasible point; the Frobenius-norm"
        " control has no such preference and picks a different feasible point."
    )


if __name__ == "__main__":
    main()
