"""Density-matrix reconstruction from per-setting probability tables.

Each scheme (17 settings for three qubits, 7 for two) determines every
element of the density matrix through signed linear combinations of outcome
probabilities. The combination coefficients are not hardcoded: they are
derived once per scheme by solving, for each target element, the exact
linear-inversion problem over the measurement operators of the settings
assigned to that element. This makes every sign a derivation output, pinned
by the round-trip property reconstruct(exact_probs(rho)) == rho.

Diagonal elements come from the all-Z setting alone; each off-diagonal
element is assigned to the setting whose basis change exposes it (one
setting per element except the three-qubit anti-diagonal elements, which
need a pair of settings).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuits import (
    MeasurementSetting,
    three_qubit_settings,
    two_qubit_settings,
)

RULE_RESIDUAL_TOL = 1e-10

# bit-flip mask (row XOR col) -> labels of the assigned settings, (re, im)
_ASSIGN_3Q = {
    0b100: (("XZZ",), ("YZZ",)),
    0b010: (("ZXZ",), ("ZYZ",)),
    0b001: (("ZZX",), ("ZZY",)),
    0b110: (("CXZZ_AB",), ("CYZZ_AB",)),
    0b011: (("CZXZ_BC",), ("CZYZ_BC",)),
    0b101: (("CZZX_AC",), ("CZZY_AC",)),
    0b111: (("CXXZ_BC", "CYYZ_BC"), ("CXYZ_BC", "CYXZ_BC")),
}

_ASSIGN_2Q = {
    0b10: (("XZ",), ("YZ",)),
    0b01: (("ZX",), ("ZY",)),
    0b11: (("CXZ_AB",), ("CYZ_AB",)),
}


@dataclass(frozen=True)
class ExtractionRule:
    """Linear formula for one real parameter of the density matrix.

    part is 'diag', 're' or 'im'; terms are (setting_label, outcome_index,
    coefficient) triples, usually over a single setting.
    """

    element: tuple[int, int]
    part: str
    terms: tuple[tuple[str, int, float], ...]

    def apply(self, tables: dict[str, np.ndarray]) -> float:
        return sum(w * tables[label][m] for label, m, w in self.terms)


@dataclass(frozen=True)
class TomographyScheme:
    name: str
    settings: tuple[MeasurementSetting, ...]
    rules: tuple[ExtractionRule, ...]

    @property
    def nqubits(self) -> int:
        return self.settings[0].nqubits

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.settings)


def _measurement_operators(s: MeasurementSetting) -> list[np.ndarray]:
    """M_m = U† |m><m| U, so that p[m] = Tr[rho M_m]."""
    u = s.unitary()
    return [np.outer(u[m].conj(), u[m]) for m in range(u.shape[0])]


def _target_operator(r: int, c: int, part: str, dim: int) -> np.ndarray:
    """Hermitian T with Tr[rho T] equal to the targeted real parameter."""
    t = np.zeros((dim, dim), dtype=complex)
    if part == "diag":
        t[r, r] = 1
    elif part == "re":
        t[r, c] = 0.5
        t[c, r] = 0.5
    elif part == "im":
        t[r, c] = 0.5j
        t[c, r] = -0.5j
    else:
        raise ValueError(part)
    return t


def _solve_rule(
    r: int, c: int, part: str, settings: dict[str, MeasurementSetting], labels: tuple[str, ...]
) -> ExtractionRule:
    dim = 2 ** settings[labels[0]].nqubits
    cols, keys = [], []
    for label in labels:
        for m, op in enumerate(_measurement_operators(settings[label])):
            cols.append(np.concatenate([op.real.ravel(), op.imag.ravel()]))
            keys.append((label, m))
    a = np.array(cols).T
    b_mat = _target_operator(r, c, part, dim)
    b = np.concatenate([b_mat.real.ravel(), b_mat.imag.ravel()])
    w, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = np.linalg.norm(a @ w - b)
    if residual > RULE_RESIDUAL_TOL:
        raise RuntimeError(
            f"settings {labels} cannot determine {part} rho[{r},{c}] "
            f"(inversion residual {residual:.2e})"
        )
    terms = tuple(
        (label, m, float(wi)) for (label, m), wi in zip(keys, w) if abs(wi) > 1e-12
    )
    return ExtractionRule(element=(r, c), part=part, terms=terms)


def derive_rules(
    settings: tuple[MeasurementSetting, ...],
    assignment: dict[int, tuple[tuple[str, ...], tuple[str, ...]]],
) -> tuple[ExtractionRule, ...]:
    """Derive the full rule set for a scheme; raises if any element fails."""
    by_label = {s.label: s for s in settings}
    dim = 2 ** settings[0].nqubits
    diag_label = settings[0].label  # all-Z setting is first by convention
    rules = [
        _solve_rule(r, r, "diag", by_label, (diag_label,)) for r in range(dim)
    ]
    for r in range(dim):
        for c in range(r + 1, dim):
            re_labels, im_labels = assignment[r ^ c]
            rules.append(_solve_rule(r, c, "re", by_label, re_labels))
            rules.append(_solve_rule(r, c, "im", by_label, im_labels))
    return tuple(rules)


@lru_cache(maxsize=None)
def three_qubit_scheme() -> TomographyScheme:
    settings = three_qubit_settings()
    return TomographyScheme(
        name="ThreeQubit17",
        settings=settings,
        rules=derive_rules(settings, _ASSIGN_3Q),
    )


@lru_cache(maxsize=None)
def two_qubit_scheme() -> TomographyScheme:
    settings = two_qubit_settings()
    return TomographyScheme(
        name="TwoQubit7",
        settings=settings,
        rules=derive_rules(settings, _ASSIGN_2Q),
    )


def _check_tables(scheme: TomographyScheme, tables: dict[str, np.ndarray]) -> None:
    dim = 2**scheme.nqubits
    for label in scheme.labels:
        if label not in tables:
            raise ValueError(f"missing probability table for setting {label}")
        if len(tables[label]) != dim:
            raise ValueError(f"table for {label} has wrong length")


def reconstruct(scheme: TomographyScheme, tables: dict[str, np.ndarray]) -> np.ndarray:
    """Assemble a Hermitian unit-trace matrix from a scheme's rule set.

    The output may have negative eigenvalues before spectral correction.
    """
    _check_tables(scheme, tables)
    dim = 2**scheme.nqubits
    rho = np.zeros((dim, dim), dtype=complex)
    for rule in scheme.rules:
        r, c = rule.element
        val = rule.apply(tables)
        if rule.part == "diag":
            rho[r, r] = val
        elif rule.part == "re":
            rho[r, c] += val
            rho[c, r] += val
        else:
            rho[r, c] += 1j * val
            rho[c, r] += -1j * val
    return rho


def reconstruct_3q(tables: dict[str, np.ndarray]) -> np.ndarray:
    """Three-qubit reconstruction from the 17-setting tables."""
    return reconstruct(three_qubit_scheme(), tables)


def reconstruct_2q(tables: dict[str, np.ndarray]) -> np.ndarray:
    """Two-qubit reconstruction from the 7-setting tables."""
    return reconstruct(two_qubit_scheme(), tables)


def _hermitian_basis(dim: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """Affine parameterization of Hermitian unit-trace matrices.

    Returns (anchor, basis): rho(x) = anchor + sum_p x_p basis[p]. The last
    diagonal entry absorbs the trace constraint.
    """
    anchor = np.zeros((dim, dim), dtype=complex)
    anchor[dim - 1, dim - 1] = 1
    basis = []
    for r in range(dim - 1):
        b = np.zeros((dim, dim), dtype=complex)
        b[r, r] = 1
        b[dim - 1, dim - 1] = -1
        basis.append(b)
    for r in range(dim):
        for c in range(r + 1, dim):
            b = np.zeros((dim, dim), dtype=complex)
            b[r, c] = b[c, r] = 1
            basis.append(b)
            b = np.zeros((dim, dim), dtype=complex)
            b[r, c] = 1j
            b[c, r] = -1j
            basis.append(b)
    return anchor, basis


def lsq_reconstruct(
    scheme: TomographyScheme, tables: dict[str, np.ndarray]
) -> np.ndarray:
    """Least-squares fit of a Hermitian unit-trace matrix to all tables.

    Minimizes the summed squared deviation between the tables and the
    predicted outcome probabilities over every setting of the scheme. Agrees
    with the closed-form reconstruction on exact data; on noisy data it
    spreads the residual across all settings instead.
    """
    _check_tables(scheme, tables)
    dim = 2**scheme.nqubits
    anchor, basis = _hermitian_basis(dim)
    rows, rhs = [], []
    for s in scheme.settings:
        ops = _measurement_operators(s)
        p = tables[s.label]
        for m, op in enumerate(ops):
            rows.append([np.real(np.trace(op @ b)) for b in basis])
            rhs.append(p[m] - np.real(np.trace(op @ anchor)))
    a = np.array(rows)
    cond = np.linalg.cond(a)
    if cond > 1e8:
        raise RuntimeError(f"measurement map is numerically singular (cond {cond:.2e})")
    x, *_ = np.linalg.lstsq(a, np.array(rhs), rcond=None)
    rho = anchor.copy()
    for xp, b in zip(x, basis):
        rho = rho + xp * b
    return rho


def density_to_json_dict(rho: np.ndarray) -> dict:
    """Serialized form {"nqubits": n, "re": [[..]], "im": [[..]]}, row-major."""
    n = rho.shape[0].bit_length() - 1
    return {
        "nqubits": n,
        "re": np.real(rho).tolist(),
        "im": np.imag(rho).tolist(),
    }


def density_from_json_dict(d: dict) -> np.ndarray:
    rho = np.array(d["re"], dtype=float) + 1j * np.array(d["im"], dtype=float)
    dim = 2 ** int(d["nqubits"])
    if rho.shape != (dim, dim):
        raise ValueError(f"matrix shape {rho.shape} inconsistent with nqubits")
    return rho


def save_density(rho: np.ndarray, path) -> None:
    with open(path, "w") as f:
        json.dump(density_to_json_dict(rho), f, indent=1, sort_keys=True)
        f.write("\n")


def load_density(path) -> np.ndarray:
    with open(path) as f:
        return density_from_json_dict(json.load(f))
