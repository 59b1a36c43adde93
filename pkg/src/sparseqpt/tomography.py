"""Experiment configurations for coincident-count tomography of a two-qubit
channel: the 16-state input/measurement set, per-pair sensing vectors,
the stacked sensing matrix, and binomial count sampling.

For a measurement state phi_a and input state phi_b the click probability of
a channel with process matrix X is p_ab = g_ab† X g_ab with
(g_ab)_i = phi_a† Γ_i phi_b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .basis import OperatorBasis
from .channels import ProcessMatrix
from .linalg import vec

__all__ = [
    "StateSet",
    "PairConfig",
    "SensingMap",
    "CountData",
    "ketset_states",
    "g_vector",
    "probability",
    "full_config",
    "sub6_config",
    "sensing_matrix",
    "sample_counts",
    "empirical_probabilities",
    "counts_to_jsonl",
    "counts_from_jsonl",
]

RANK_THRESHOLD = 1e-10  # relative to the largest singular value


@dataclass(frozen=True)
class StateSet:
    """Ordered list of unit state vectors with labels."""

    states: tuple[np.ndarray, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        for psi in self.states:
            if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
                raise ValueError("states must be normalized")


@dataclass(frozen=True)
class PairConfig:
    """One coincident-count configuration: measurement state index ``a``,
    input state index ``b`` (both 1-based into the 16-state set), and the
    sensing vector g in the basis it was built for."""

    a: int
    b: int
    g: np.ndarray


@dataclass(frozen=True)
class SensingMap:
    """Stacked sensing matrix: row r of G satisfies
    G[r]·vec(X) = g_r† X g_r for Hermitian X (column-major vec)."""

    basis: OperatorBasis
    configs: tuple[PairConfig, ...]
    G: np.ndarray
    rank: int


@dataclass(frozen=True)
class CountData:
    """Binomial trial counts per configuration, with the master seed used."""

    a: np.ndarray  # 1-based measurement state indices
    b: np.ndarray  # 1-based input state indices
    trials: np.ndarray
    counts: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if np.any(self.counts < 0) or np.any(self.counts > self.trials):
            raise ValueError("counts must lie in [0, trials]")


def ketset_states() -> StateSet:
    """The 16 two-qubit input/measurement states: the four computational
    basis states, the six (e_a+e_b)/√2 superpositions, and the six
    (e_a−i·e_b)/√2 superpositions, in that printed column order."""
    eye = np.eye(4, dtype=complex)
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    states: list[np.ndarray] = []
    labels: list[str] = []
    for i in range(4):
        states.append(eye[:, i].copy())
        labels.append(f"|{i + 1}>")
    for i, j in pairs:
        states.append((eye[:, i] + eye[:, j]) / np.sqrt(2.0))
        labels.append(f"(|{i + 1}>+|{j + 1}>)/sqrt2")
    for i, j in pairs:
        states.append((eye[:, i] - 1j * eye[:, j]) / np.sqrt(2.0))
        labels.append(f"(|{i + 1}>-i|{j + 1}>)/sqrt2")
    return StateSet(states=tuple(states), labels=tuple(labels))


def g_vector(phi_a: np.ndarray, phi_b: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """Sensing vector with components phi_a† Γ_i phi_b."""
    phi_a = np.asarray(phi_a, dtype=complex)
    phi_b = np.asarray(phi_b, dtype=complex)
    if phi_a.size != basis.n_s or phi_b.size != basis.n_s:
        raise ValueError("state dimension does not match basis")
    return np.array([np.vdot(phi_a, G @ phi_b) for G in basis.gammas])


def probability(X: ProcessMatrix, cfg: PairConfig) -> float:
    """Click probability g† X g, clamped to [0, 1].

    The imaginary residue must vanish (Hermitian X); a residue above 1e-9
    signals an invalid process matrix or mismatched basis.
    """
    val = np.vdot(cfg.g, X.mat @ cfg.g)
    if abs(val.imag) > 1e-9:
        raise ValueError(f"probability has imaginary residue {val.imag:.3e}")
    return float(np.clip(val.real, 0.0, 1.0))


def _configs_for(pairs: list[tuple[int, int]], basis: OperatorBasis) -> list[PairConfig]:
    states = ketset_states().states
    return [
        PairConfig(a=a, b=b, g=g_vector(states[a - 1], states[b - 1], basis))
        for a, b in pairs
    ]


def full_config(basis: OperatorBasis) -> list[PairConfig]:
    """All 256 (measurement, input) pairs over the 16-state set."""
    pairs = [(a, b) for a in range(1, 17) for b in range(1, 17)]
    return _configs_for(pairs, basis)


def sub6_config(basis: OperatorBasis) -> list[PairConfig]:
    """The 36 pairs over states 5..10, the six (e_a+e_b)/√2 columns."""
    pairs = [(a, b) for a in range(5, 11) for b in range(5, 11)]
    return _configs_for(pairs, basis)


def sensing_matrix(configs: list[PairConfig], basis: OperatorBasis) -> SensingMap:
    """Stack the quadratic forms g g† into a matrix acting on vec(X).

    For two-qubit configurations indexing the 16-state set, each sensing
    vector is checked against ``basis`` (it must have been built in the same
    basis). The rank uses the threshold 1e-10·s_max on singular values.
    """
    states = ketset_states().states if basis.n_s == 4 else None
    for c in configs:
        g = np.asarray(c.g)
        if g.size != basis.dim:
            raise ValueError("sensing vector length does not match basis dimension")
        if states is not None and 1 <= c.a <= 16 and 1 <= c.b <= 16:
            expect = g_vector(states[c.a - 1], states[c.b - 1], basis)
            if np.max(np.abs(g - expect)) > 1e-12:
                raise ValueError(
                    f"config ({c.a},{c.b}) sensing vector was built in a different basis"
                )
    rows = [vec(np.outer(np.asarray(c.g).conj(), np.asarray(c.g))) for c in configs]
    G = np.array(rows)
    s = np.linalg.svd(G, compute_uv=False)
    rank = int(np.sum(s > RANK_THRESHOLD * s[0])) if s.size and s[0] > 0 else 0
    return SensingMap(basis=basis, configs=tuple(configs), G=G, rank=rank)


def sample_counts(
    X_true: ProcessMatrix,
    configs: list[PairConfig],
    n_per_config: int,
    seed: int,
) -> CountData:
    """Draw an independent binomial count for every configuration.

    Each configuration gets its own substream derived from (seed, index), so
    results are reproducible and configs could be sampled in parallel.
    """
    if n_per_config <= 0:
        raise ValueError("number of trials must be positive")
    a = np.array([c.a for c in configs])
    b = np.array([c.b for c in configs])
    trials = np.full(len(configs), n_per_config, dtype=np.int64)
    counts = np.empty(len(configs), dtype=np.int64)
    for i, cfg in enumerate(configs):
        rng = np.random.default_rng([seed, i])
        counts[i] = rng.binomial(n_per_config, probability(X_true, cfg))
    return CountData(a=a, b=b, trials=trials, counts=counts, seed=seed)


def empirical_probabilities(data: CountData) -> np.ndarray:
    """Per-configuration success ratios N_ab/N."""
    if np.any(data.trials <= 0):
        raise ValueError("trial counts must be positive")
    return data.counts / data.trials


def counts_to_jsonl(data: CountData) -> str:
    """One JSON object per configuration: {a, b, N, count, seed}."""
    lines = [
        json.dumps(
            {"a": int(a), "b": int(b), "N": int(n), "count": int(c), "seed": data.seed}
        )
        for a, b, n, c in zip(data.a, data.b, data.trials, data.counts)
    ]
    return "\n".join(lines) + "\n"


def counts_from_jsonl(text: str) -> CountData:
    """Inverse of :func:`counts_to_jsonl`."""
    rows = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("no count records found")
    return CountData(
        a=np.array([r["a"] for r in rows]),
        b=np.array([r["b"] for r in rows]),
        trials=np.array([r["N"] for r in rows], dtype=np.int64),
        counts=np.array([r["count"] for r in rows], dtype=np.int64),
        seed=int(rows[0]["seed"]),
    )
