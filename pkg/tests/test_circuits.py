import numpy as np
import pytest

from wtomo.circuits import (
    Gate,
    H,
    I2,
    MeasurementSetting,
    THREE_QUBIT_LABELS,
    TWO_QUBIT_LABELS,
    cnot_matrix,
    lift,
    prepare_w,
    rx,
    setting_unitary,
    three_qubit_settings,
    two_qubit_settings,
    w_vector,
)
from wtomo.linalg import kron


def is_unitary(u, tol=1e-12):
    return np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= tol


class TestGates:
    def test_lift_single_qubit(self):
        assert np.allclose(lift(H, 0, 1), H)

    def test_rx_half_pi(self):
        expected = np.array([[1, -1j], [-1j, 1]]) / np.sqrt(2)
        assert np.allclose(rx(np.pi / 2), expected, atol=1e-15)

    def test_cnot_distant_target(self):
        # CNOT(control 0, target 2) on 3 qubits maps |100> -> |101>
        c = cnot_matrix(0, 2, 3)
        v = np.zeros(8)
        v[0b100] = 1
        out = c @ v
        assert out[0b101] == 1

    def test_cnot_errors(self):
        with pytest.raises(ValueError):
            cnot_matrix(0, 0, 2)
        with pytest.raises(ValueError):
            cnot_matrix(0, 3, 2)

    def test_gate_matrix_requires_angle(self):
        with pytest.raises(ValueError):
            Gate("RX", (0,)).matrix(1)


class TestSettings:
    def test_labels_unique_and_fixed(self):
        assert len(set(THREE_QUBIT_LABELS)) == 17
        assert len(set(TWO_QUBIT_LABELS)) == 7

    def test_all_unitary(self):
        for s in three_qubit_settings() + two_qubit_settings():
            assert is_unitary(s.unitary()), s.label

    def test_identity_setting(self):
        s = MeasurementSetting.from_label("ZZZ", 3)
        assert np.allclose(s.unitary(), np.eye(8))

    def test_local_hadamard_block(self):
        s = MeasurementSetting.from_label("XZZ", 3)
        assert np.allclose(s.unitary(), kron(H, np.eye(4)))

    def test_cnot_setting_structure(self):
        # CXZZ_AB = (H x I x I) . CNOT with control on the rotated qubit A
        s = MeasurementSetting.from_label("CXZZ_AB", 3)
        assert s.cnot == (0, 1)
        expected = kron(H, np.eye(4)) @ cnot_matrix(0, 1, 3)
        assert np.allclose(s.unitary(), expected)

    def test_ac_setting_control_on_gate_qubit(self):
        # for the AC pair the non-Z gate sits on C, so C is the control
        s = MeasurementSetting.from_label("CZZX_AC", 3)
        assert s.cnot == (2, 0)

    def test_gates_compose_to_unitary(self):
        for s in three_qubit_settings():
            u = np.eye(8, dtype=complex)
            for g in s.gates():
                u = g.matrix(3) @ u
            assert np.allclose(u, s.unitary())

    def test_malformed_labels(self):
        for bad in ("QZZ", "ZZ", "CXZZ", "CXZZ_AD"):
            with pytest.raises(ValueError):
                MeasurementSetting.from_label(bad, 3)

    def test_cnot_setting_exposes_coherence(self):
        # (H x I x I) CNOT_AB on the W state: the outcome statistics must
        # determine Re rho_{010;100} = 1/3 (checked via the scheme's rule)
        from wtomo.noise import exact_probs
        from wtomo.tomography import three_qubit_scheme

        rho_w = np.outer(w_vector(), w_vector().conj())
        tables = {s.label: exact_probs(rho_w, s) for s in three_qubit_settings()}
        rule = next(
            r for r in three_qubit_scheme().rules
            if r.element == (0b010, 0b100) and r.part == "re"
        )
        assert {label for label, _, _ in rule.terms} == {"CXZZ_AB"}
        assert abs(rule.apply(tables) - 1 / 3) <= 1e-12


class TestPrepareW:
    def test_amplitudes(self):
        psi = prepare_w()
        target = w_vector()
        # equality up to global phase
        assert abs(abs(np.vdot(target, psi)) - 1.0) <= 1e-12
        for idx in (0, 3, 5, 6, 7):
            assert abs(psi[idx]) <= 1e-12
        for idx in (1, 2, 4):
            assert abs(abs(psi[idx]) - 1 / np.sqrt(3)) <= 1e-12

    def test_normalized(self):
        assert abs(np.linalg.norm(prepare_w()) - 1.0) <= 1e-12


def test_setting_unitary_function_matches_method():
    s = MeasurementSetting.from_label("CYXZ_BC", 3)
    assert np.allclose(setting_unitary(s), s.unitary())
