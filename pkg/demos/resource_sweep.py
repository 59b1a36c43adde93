"""Estimation accuracy versus measurement resources.

Runs two small seeded Monte Carlo sweeps over trial counts N on the
two-qubit bit-flip testbed at p_bf = 0.05:

  * constrained least squares on the complete 256-pair configuration;
  * reweighted l1 minimization on the reduced 36-pair configuration.

Both mean RMS errors decay like 1/sqrt(N), and the l1 estimator achieves
roughly half the least-squares error while using about a seventh of the
measurement settings. Runs and seeds are fully reproducible; pass a
different --runs to trade error-bar quality for time.

Run:  python3 demos/resource_sweep.py [--runs 5]
"""

import argparse
import tempfile

from sparseqpt import SweepSpec, emit_results, run_sweep

N_GRID = (500, 5_000, 50_000)


def sweep(estimator: str, config: str, runs: int):
    spec = SweepSpec(
        p_bf=(0.05,),
        n_per_config=N_GRID,
        estimators=(estimator,),
        config=config,
        runs=runs,
        master_seed=0,
    )
    return run_sweep(spec)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=5, help="Monte Carlo runs per cell")
    ap.add_argument("--out", default=None, help="optional CSV output path for the l1 sweep")
    args = ap.parse_args()

    print(f"running {2 * len(N_GRID) * args.runs} solves ...")
    res_ls = sweep("ls", "full16", args.runs)
    res_l1 = sweep("l1rw", "sub6", args.runs)

    stats_ls = res_ls.cell_stats()
    stats_l1 = res_l1.cell_stats()
    print(f"\nbaseline actual-vs-ideal distance: {res_ls.baselines[0.05]:.4f}\n")
    print(f"{'N':>8}{'ls/256 mean':>13}{'l1/36 mean':>13}{'ratio':>8}")
    for n in N_GRID:
        m_ls = stats_ls[(0.05, n, "ls")]["mean"]
        m_l1 = stats_l1[(0.05, n, "l1rw")]["mean"]
        print(f"{n:>8}{m_ls:>13.5f}{m_l1:>13.5f}{m_l1 / m_ls:>8.2f}")

    out = args.out or tempfile.mktemp(suffix=".csv", prefix="sparseqpt_sweep_")
    emit_results(res_l1, out)
    print(f"\nper-run l1 rows written to {out} (+ .summary.json)")


if __name__ == "__main__":
    main()
