"""Command-line entry points.

Subcommands:
  sweep    run a Monte Carlo estimation sweep from a JSON spec file
  procmat  dump the magnitudes of a bit-flip channel's process matrix
  rank     report the rank of the sensing matrix for a configuration
  version  print the package version

Exit codes: 0 success, 2 spec/argument validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from importlib.metadata import PackageNotFoundError, version as pkg_version

import numpy as np

from .basis import ideal_svd_basis, natural_basis
from .harness import SpecError, SweepSpec, emit_process_matrix, emit_results, run_sweep
from .tomography import full_config, sensing_matrix, sub6_config

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparseqpt")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo estimation sweep")
    p_sweep.add_argument("--spec", required=True, help="path to a JSON sweep spec")
    p_sweep.add_argument("--out", default=None, help="override the spec's output path")

    p_proc = sub.add_parser("procmat", help="dump process-matrix magnitudes as JSON")
    p_proc.add_argument("--p-bf", type=float, required=True, dest="p_bf")
    p_proc.add_argument("--basis", choices=("natural", "ideal-svd"), required=True)
    p_proc.add_argument("--out", required=True)

    p_rank = sub.add_parser("rank", help="report the sensing-matrix rank")
    p_rank.add_argument("--config", choices=("full16", "sub6"), required=True)
    p_rank.add_argument("--basis", choices=("natural", "ideal-svd"), default="natural")

    sub.add_parser("version", help="print the package version")
    return parser


def _cmd_sweep(args) -> int:
    try:
        with open(args.spec) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read spec: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        spec = SweepSpec.from_json(text)
    except (SpecError, TypeError) as exc:
        print(f"error: invalid spec: {exc}", file=sys.stderr)
        return EXIT_SPEC
    result = run_sweep(spec)
    out = args.out or spec.output
    if out is None:
        print("error: no output path (set 'output' in the spec or pass --out)", file=sys.stderr)
        return EXIT_SPEC
    try:
        emit_results(result, out)
    except OSError as exc:
        print(f"error: cannot write results: {exc}", file=sys.stderr)
        return EXIT_IO
    stats = result.cell_stats()
    for (p, n, est), cell in sorted(stats.items()):
        print(f"p_bf={p:g} N={n} {est}: mean={cell['mean']:.6g} std={cell['std']:.6g}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_procmat(args) -> int:
    if not 0.0 <= args.p_bf <= 1.0:
        print("error: --p-bf must lie in [0, 1]", file=sys.stderr)
        return EXIT_SPEC
    try:
        emit_process_matrix(args.p_bf, args.basis, args.out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_rank(args) -> int:
    if args.basis == "natural":
        basis = natural_basis(4)
    else:
        basis = ideal_svd_basis(np.eye(4, dtype=complex))
    configs = full_config(basis) if args.config == "full16" else sub6_config(basis)
    smap = sensing_matrix(configs, basis)
    print(f"config={args.config} basis={args.basis} rows={len(configs)} rank={smap.rank}")
    return EXIT_OK


def _cmd_version() -> int:
    try:
        print(pkg_version("sparseqpt"))
    except PackageNotFoundError:
        print("0.1.0")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "sweep":
        return _cmd_sweep(args)
    if args.command == "procmat":
        return _cmd_procmat(args)
    if args.command == "rank":
        return _cmd_rank(args)
    return _cmd_version()


if __name__ == "__main__":
    sys.exit(main())
