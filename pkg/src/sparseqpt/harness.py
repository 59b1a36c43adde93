"""Seeded Monte Carlo experiment sweeps over the noisy two-qubit memory
testbed: sample tomography counts, run the selected estimators, and
aggregate RMS estimation errors per (noise level, trial count, estimator)
cell.

Per-run seeds derive from a stable 64-bit hash of
``"{master_seed}|{p_bf:.12g}|{N}|{estimator}|{run}"`` (first 8 bytes of its
SHA-256, big-endian), so sweeps are reproducible across machines and the
runs of a cell are independent streams.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from hashlib import sha256

import numpy as np

from .basis import OperatorBasis, ideal_svd_basis, natural_basis
from .channels import (
    ProcessMatrix,
    bitflip_channel,
    change_basis,
    process_matrix,
    rms_distance,
)
from .estimators import (
    EstimationProblem,
    infinite_data_problem,
    reweighted_l1,
    solve_ls,
    solve_ml,
    solve_rms_objective,
)
from .tomography import (
    empirical_probabilities,
    full_config,
    sample_counts,
    sensing_matrix,
    sub6_config,
)

__all__ = [
    "SweepSpec",
    "RunRecord",
    "SweepResult",
    "derive_seed",
    "run_sweep",
    "emit_results",
    "emit_process_matrix",
]

ESTIMATORS = ("ls", "ml", "l1rw", "rmsobj")
WORKERS_ENV = "SPARSEQPT_WORKERS"


class SpecError(ValueError):
    """Invalid sweep specification."""


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one sweep (see README for the JSON form)."""

    p_bf: tuple[float, ...] = (0.05, 0.2)
    n_per_config: tuple[int, ...] = (500, 5_000, 50_000, 500_000)
    estimators: tuple[str, ...] = ("ls", "l1rw")
    config: str = "sub6"  # full16 | sub6
    basis: str = "ideal-svd"  # natural | ideal-svd
    qubits: int = 2
    runs: int = 50
    infinite_data: bool = False
    master_seed: int = 0
    output: str | None = None

    def validate(self) -> None:
        if self.qubits != 2:
            raise SpecError("only the two-qubit testbed is supported")
        if self.runs < 1:
            raise SpecError("runs must be at least 1")
        if not self.estimators:
            raise SpecError("estimator set must be nonempty")
        for est in self.estimators:
            if est not in ESTIMATORS:
                raise SpecError(f"unknown estimator {est!r}")
            if est == "rmsobj" and not self.infinite_data:
                raise SpecError("the RMS-objective control requires infinite data")
        if self.config not in ("full16", "sub6"):
            raise SpecError(f"unknown configuration {self.config!r}")
        if self.basis not in ("natural", "ideal-svd"):
            raise SpecError(f"unknown basis {self.basis!r}")
        for p in self.p_bf:
            if not 0.0 <= p <= 1.0:
                raise SpecError("bit-flip probabilities must lie in [0, 1]")
        if not self.infinite_data:
            for n in self.n_per_config:
                if n < 1:
                    raise SpecError("trial counts must be positive")

    @classmethod
    def from_json(cls, text: str) -> "SweepSpec":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SpecError("spec must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise SpecError(f"unknown spec fields: {sorted(unknown)}")
        kwargs = dict(raw)
        for key in ("p_bf", "n_per_config", "estimators"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        spec = cls(**kwargs)
        spec.validate()
        return spec

    def to_json(self) -> str:
        return json.dumps(
            {
                "p_bf": list(self.p_bf),
                "n_per_config": list(self.n_per_config),
                "estimators": list(self.estimators),
                "config": self.config,
                "basis": self.basis,
                "qubits": self.qubits,
                "runs": self.runs,
                "infinite_data": self.infinite_data,
                "master_seed": self.master_seed,
                "output": self.output,
            }
        )


@dataclass(frozen=True)
class RunRecord:
    p_bf: float
    n_per_config: int
    estimator: str
    run: int
    seed: int
    rms_error: float
    status: str
    wall_ms: float


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[RunRecord, ...]
    baselines: dict[float, float] = field(default_factory=dict)

    def cell_stats(self) -> dict[tuple[float, int, str], dict[str, float]]:
        """Mean and sample standard deviation of the RMS error per cell."""
        cells: dict[tuple[float, int, str], list[RunRecord]] = {}
        for row in self.rows:
            cells.setdefault((row.p_bf, row.n_per_config, row.estimator), []).append(row)
        out = {}
        for key, recs in cells.items():
            errs = np.array([r.rms_error for r in recs])
            out[key] = {
                "mean": float(errs.mean()),
                "std": float(errs.std(ddof=1)) if errs.size > 1 else 0.0,
                "runs": len(recs),
                "failures": sum(r.status != "converged" for r in recs),
            }
        return out


def derive_seed(master_seed: int, p_bf: float, n: int, estimator: str, run: int) -> int:
    """Stable 64-bit per-run seed; see the module docstring for the recipe."""
    key = f"{master_seed}|{p_bf:.12g}|{n}|{estimator}|{run}"
    return int.from_bytes(sha256(key.encode()).digest()[:8], "big")


def _estimation_basis(spec: SweepSpec) -> OperatorBasis:
    n_s = 2**spec.qubits
    if spec.basis == "natural":
        return natural_basis(n_s)
    return ideal_svd_basis(np.eye(n_s, dtype=complex))


def _configs(spec: SweepSpec, basis: OperatorBasis):
    return full_config(basis) if spec.config == "full16" else sub6_config(basis)


def _dispatch(estimator: str, problem: EstimationProblem):
    if estimator == "ls":
        return solve_ls(problem)
    if estimator == "ml":
        return solve_ml(problem)
    if estimator == "l1rw":
        return reweighted_l1(problem)
    if estimator == "rmsobj":
        return solve_rms_objective(problem)
    raise SpecError(f"unknown estimator {estimator!r}")


def _error_basis(spec: SweepSpec) -> OperatorBasis:
    """RMS errors are reported in the ideal/SVD basis of the identity."""
    return ideal_svd_basis(np.eye(2**spec.qubits, dtype=complex))


def _rms_in_error_basis(spec: SweepSpec, X_est: ProcessMatrix, X_true: ProcessMatrix) -> float:
    eb = _error_basis(spec)
    return rms_distance(change_basis(X_est, eb), change_basis(X_true, eb))


def _execute_run(spec_json: str, p_bf: float, n: int, estimator: str, run: int) -> RunRecord:
    spec = SweepSpec.from_json(spec_json)
    basis = _estimation_basis(spec)
    X_true = process_matrix(bitflip_channel(spec.qubits, p_bf), basis)
    configs = _configs(spec, basis)
    start = time.perf_counter()
    if spec.infinite_data:
        seed = 0
        problem = infinite_data_problem(X_true, configs, basis, mode=_mode_of(estimator))
    else:
        seed = derive_seed(spec.master_seed, p_bf, n, estimator, run)
        counts = sample_counts(X_true, configs, n, seed)
        problem = EstimationProblem(
            basis=basis,
            configs=tuple(configs),
            data=empirical_probabilities(counts),
            counts=counts,
            mode=_mode_of(estimator),
        )
    try:
        sol = _dispatch(estimator, problem)
        err = _rms_in_error_basis(spec, sol.X_est, X_true)
        status = sol.status
    except RuntimeError:
        err, status = float("nan"), "infeasible"
    wall_ms = (time.perf_counter() - start) * 1e3
    return RunRecord(
        p_bf=p_bf,
        n_per_config=n,
        estimator=estimator,
        run=run,
        seed=seed,
        rms_error=err,
        status=status,
        wall_ms=wall_ms,
    )


def _mode_of(estimator: str) -> str:
    return {"ls": "LS", "ml": "ML", "l1rw": "L1RW", "rmsobj": "RMSOBJ"}[estimator]


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Execute every (p_bf, N, estimator) cell for the requested runs.

    Infinite-data cells consume no randomness and are computed once, then
    replicated across runs. Worker count comes from the SPARSEQPT_WORKERS
    environment variable (default 1); aggregation is order-independent.
    """
    spec.validate()
    spec_json = spec.to_json()
    n_values = spec.n_per_config if not spec.infinite_data else (0,)
    tasks = []
    for p in spec.p_bf:
        for n in n_values:
            for est in spec.estimators:
                runs = 1 if spec.infinite_data else spec.runs
                for r in range(runs):
                    tasks.append((p, n, est, r))
    workers = max(1, int(os.environ.get(WORKERS_ENV, "1")))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(_execute_task, [(spec_json,) + t for t in tasks], chunksize=1)
            )
    else:
        rows = [_execute_run(spec_json, *t) for t in tasks]
    if spec.infinite_data and spec.runs > 1:
        # Run-count independent: replicate the single deterministic result.
        expanded = []
        for row in rows:
            for r in range(spec.runs):
                expanded.append(RunRecord(**{**row.__dict__, "run": r}))
        rows = expanded
    rows.sort(key=lambda r: (r.p_bf, r.n_per_config, r.estimator, r.run))
    baselines = {p: _baseline(spec, p) for p in spec.p_bf}
    return SweepResult(spec=spec, rows=tuple(rows), baselines=baselines)


def _execute_task(args) -> RunRecord:
    return _execute_run(*args)


def _baseline(spec: SweepSpec, p_bf: float) -> float:
    basis = _error_basis(spec)
    X_actual = process_matrix(bitflip_channel(spec.qubits, p_bf), basis)
    X_ideal = process_matrix(bitflip_channel(spec.qubits, 0.0), basis)
    return rms_distance(X_actual, X_ideal)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def emit_results(result: SweepResult, path: str) -> None:
    """Write per-run rows as CSV and a JSON summary next to it.

    The CSV columns are p_bf,N,estimator,run,seed,rms_error,status,wall_ms
    with 12-significant-digit decimal rendering; the summary carries
    per-cell means/stds and the actual-vs-ideal baseline per noise level.
    """
    lines = ["p_bf,N,estimator,run,seed,rms_error,status,wall_ms"]
    for row in result.rows:
        lines.append(
            ",".join(
                [
                    _fmt(row.p_bf),
                    str(row.n_per_config),
                    row.estimator,
                    str(row.run),
                    str(row.seed),
                    _fmt(row.rms_error),
                    row.status,
                    _fmt(row.wall_ms),
                ]
            )
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    summary = {
        "spec": json.loads(result.spec.to_json()),
        "baselines": {_fmt(p): _fmt(v) for p, v in result.baselines.items()},
        "cells": [
            {
                "p_bf": _fmt(p),
                "N": n,
                "estimator": est,
                **{k: (_fmt(v) if isinstance(v, float) else v) for k, v in stats.items()},
            }
            for (p, n, est), stats in sorted(result.cell_stats().items())
        ],
    }
    with open(_summary_path(path), "w") as fh:
        json.dump(summary, fh, indent=2)


def _summary_path(path: str) -> str:
    return path + ".summary.json"


def emit_process_matrix(p_bf: float, basis_label: str, path: str, qubits: int = 2) -> None:
    """Write the element magnitudes |X_ab| of the bit-flip channel's process
    matrix as a JSON grid for external heat-map rendering."""
    n_s = 2**qubits
    if basis_label == "natural":
        basis = natural_basis(n_s)
    elif basis_label == "ideal-svd":
        basis = ideal_svd_basis(np.eye(n_s, dtype=complex))
    else:
        raise SpecError(f"unknown basis {basis_label!r}")
    X = process_matrix(bitflip_channel(qubits, p_bf), basis)
    payload = {
        "p_bf": p_bf,
        "basis": basis_label,
        "n_S": n_s,
        "abs": [[float(abs(z)) for z in row] for row in X.mat],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
