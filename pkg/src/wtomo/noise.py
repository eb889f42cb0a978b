"""Readout-noise simulation: exact outcome probabilities, per-qubit
confusion, finite-shot sampling, and simulated calibration runs.

All sampling uses numpy's PCG64 generator (``np.random.default_rng``); a
fixed seed gives a bit-for-bit reproducible stream. Distinct settings use
derived seeds (seed XOR setting index) so they can be sampled independently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuits import MeasurementSetting, QUBIT_NAMES
from .linalg import kron

RNG_ALGORITHM = "numpy PCG64 (default_rng)"

# ibm_osaka readout calibration for the qubit triple (q97, q98, q99) = (A, B, C)
IBM_OSAKA_READOUT = (
    ("q97", 0.023, 0.008),
    ("q98", 0.004, 0.009),
    ("q99", 0.030, 0.034),
)


@dataclass(frozen=True)
class QubitReadout:
    """Per-qubit confusion: p01 = P(read 0 | prepared 1), p10 = P(read 1 | 0)."""

    p01: float
    p10: float

    def calibration_matrix(self) -> np.ndarray:
        """Column-stochastic 2x2 matrix [[p(0|0), p(0|1)], [p(1|0), p(1|1)]]."""
        return np.array([[1 - self.p10, self.p01], [self.p10, 1 - self.p01]])


@dataclass(frozen=True)
class ReadoutModel:
    """Independent per-qubit readout confusion for a register, ordered A, B, C."""

    qubits: tuple[QubitReadout, ...]

    def __post_init__(self):
        for q in self.qubits:
            if not (0 <= q.p01 <= 1 and 0 <= q.p10 <= 1):
                raise ValueError(f"confusion probabilities out of range: {q}")

    @classmethod
    def noiseless(cls, nqubits: int) -> "ReadoutModel":
        return cls(tuple(QubitReadout(0.0, 0.0) for _ in range(nqubits)))

    @classmethod
    def ibm_osaka(cls) -> "ReadoutModel":
        return cls(tuple(QubitReadout(p01, p10) for _, p01, p10 in IBM_OSAKA_READOUT))

    def subset(self, qubits: list[int] | tuple[int, ...]) -> "ReadoutModel":
        return ReadoutModel(tuple(self.qubits[q] for q in qubits))

    def confusion_matrix(self) -> np.ndarray:
        """Tensor product of per-qubit calibration matrices."""
        f = np.eye(1)
        for q in self.qubits:
            f = kron(f, q.calibration_matrix())
        return f

    def to_json_dict(self) -> dict:
        return {
            f"q{QUBIT_NAMES[i]}": {"p01": q.p01, "p10": q.p10}
            for i, q in enumerate(self.qubits)
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ReadoutModel":
        return cls(tuple(QubitReadout(v["p01"], v["p10"]) for v in d.values()))


def exact_probs(rho: np.ndarray, s: MeasurementSetting) -> np.ndarray:
    """Outcome probabilities p[m] = <m| U rho U† |m> for a setting."""
    u = s.unitary()
    if u.shape[0] != rho.shape[0]:
        raise ValueError(
            f"setting acts on {u.shape[0]}-dim space, state is {rho.shape[0]}-dim"
        )
    p = np.real(np.einsum("ij,jk,ik->i", u, rho, u.conj()))
    return np.clip(p, 0.0, None)


def apply_readout_noise(p: np.ndarray, model: ReadoutModel) -> np.ndarray:
    """Forward confusion: p' = (F_A ⊗ F_B ⊗ ...) p."""
    if 2 ** len(model.qubits) != len(p):
        raise ValueError("readout model does not cover all measured qubits")
    return model.confusion_matrix() @ p


def sample_shots(p: np.ndarray, shots: int, seed: int) -> np.ndarray:
    """Multinomial counts over outcomes; deterministic for a given seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = np.asarray(p, dtype=float)
    if p.min() < -1e-9 or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("invalid outcome distribution")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    return np.random.default_rng(seed).multinomial(shots, p)


def sample_shots_per_flip(
    p: np.ndarray, model: ReadoutModel, shots: int, seed: int
) -> np.ndarray:
    """Sample ideal outcomes, then flip each read bit per the confusion model.

    Statistically equivalent to sampling from apply_readout_noise(p, model);
    kept as a realism cross-check.
    """
    rng = np.random.default_rng(seed)
    n = len(model.qubits)
    outcomes = rng.choice(len(p), size=shots, p=np.clip(p, 0, None) / np.sum(np.clip(p, 0, None)))
    counts = np.zeros(len(p), dtype=int)
    u = rng.random(size=(shots, n))
    for k, m in enumerate(outcomes):
        out = 0
        for q in range(n):
            bit = (m >> (n - 1 - q)) & 1
            flip_p = model.qubits[q].p01 if bit else model.qubits[q].p10
            if u[k, q] < flip_p:
                bit ^= 1
            out = (out << 1) | bit
        counts[out] += 1
    return counts


def counts_to_probs(counts: np.ndarray) -> np.ndarray:
    counts = np.asarray(counts, dtype=float)
    return counts / counts.sum()


def simulate_calibration(
    model: ReadoutModel, shots: int, seed: int
) -> list[np.ndarray]:
    """Empirical calibration matrices from simulated |0>/|1> preparation runs.

    Two circuits per qubit (6 for three qubits); columns are exact count
    fractions, so each estimated matrix is column-stochastic by construction.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    mats = []
    for qi, q in enumerate(model.qubits):
        f_hat = np.zeros((2, 2))
        for prep, dist in ((0, [1 - q.p10, q.p10]), (1, [q.p01, 1 - q.p01])):
            counts = sample_shots(np.array(dist), shots, seed ^ (2 * qi + prep + 1))
            f_hat[:, prep] = counts / shots
        mats.append(f_hat)
    return mats


def derived_seed(seed: int, index: int) -> int:
    """Per-setting stream seed: base seed XOR setting index."""
    return int(seed) ^ int(index)


def counts_file_dict(
    counts: dict[str, np.ndarray],
    shots: int,
    seed: int,
    model: ReadoutModel | None,
    nqubits: int,
) -> dict:
    """Counts-file JSON object: {label -> {bitstring -> count}, shots, seed, noise}."""
    obj: dict = {}
    for label, c in counts.items():
        obj[label] = {
            format(m, f"0{nqubits}b"): int(c[m]) for m in range(len(c)) if c[m]
        }
    obj["shots"] = int(shots)
    obj["seed"] = int(seed)
    obj["noise"] = model.to_json_dict() if model is not None else None
    return obj


def load_counts_file(path) -> tuple[dict[str, np.ndarray], dict]:
    """Read a counts JSON file; returns (label -> counts array, metadata)."""
    with open(path) as f:
        obj = json.load(f)
    meta = {k: obj.pop(k, None) for k in ("shots", "seed", "noise")}
    counts = {}
    for label, table in obj.items():
        nqubits = len(next(iter(table)))
        c = np.zeros(2**nqubits, dtype=int)
        for bits, v in table.items():
            c[int(bits, 2)] = v
        counts[label] = c
    return counts, meta
