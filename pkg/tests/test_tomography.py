import numpy as np
import pytest

from wtomo.circuits import three_qubit_settings, two_qubit_settings, w_vector
from wtomo.linalg import outer, partial_trace
from wtomo.noise import exact_probs
from wtomo.tomography import (
    ExtractionRule,
    density_from_json_dict,
    density_to_json_dict,
    load_density,
    lsq_reconstruct,
    reconstruct_2q,
    reconstruct_3q,
    save_density,
    three_qubit_scheme,
    two_qubit_scheme,
)

from conftest import random_density


def tables_for(rho, settings):
    return {s.label: exact_probs(rho, s) for s in settings}


class TestSchemes:
    def test_rule_counts(self):
        # 8 diagonal + 2 * 28 off-diagonal real parameters for 3 qubits
        assert len(three_qubit_scheme().rules) == 8 + 2 * 28
        assert len(two_qubit_scheme().rules) == 4 + 2 * 6

    def test_every_element_covered(self):
        covered = {(r.element, r.part) for r in three_qubit_scheme().rules}
        for r in range(8):
            assert ((r, r), "diag") in covered
            for c in range(r + 1, 8):
                assert ((r, c), "re") in covered
                assert ((r, c), "im") in covered

    def test_diagonal_uses_all_z_only(self):
        for scheme, label in ((three_qubit_scheme(), "ZZZ"), (two_qubit_scheme(), "ZZ")):
            for rule in scheme.rules:
                if rule.part == "diag":
                    assert {t[0] for t in rule.terms} == {label}

    def test_single_setting_per_offdiagonal_except_antidiagonal(self):
        for rule in three_qubit_scheme().rules:
            if rule.part == "diag":
                continue
            labels = {t[0] for t in rule.terms}
            r, c = rule.element
            if r ^ c == 0b111:
                assert len(labels) == 2, rule
            else:
                assert len(labels) == 1, rule

    def test_antidiagonal_setting_pairs(self):
        for rule in three_qubit_scheme().rules:
            r, c = rule.element
            if r ^ c != 0b111 or rule.part == "diag":
                continue
            labels = {t[0] for t in rule.terms}
            if rule.part == "re":
                assert labels == {"CXXZ_BC", "CYYZ_BC"}
            else:
                assert labels == {"CXYZ_BC", "CYXZ_BC"}

    def test_coefficients_are_half_integers(self):
        # derivation recovers the exact analytic weights (+-1/2, +-1/4, 1)
        for scheme in (three_qubit_scheme(), two_qubit_scheme()):
            for rule in scheme.rules:
                for _, _, w in rule.terms:
                    assert abs(4 * w - round(4 * w)) <= 1e-9, rule


class TestRoundTrip:
    def test_w_state_exact(self):
        rho = outer(w_vector())
        got = reconstruct_3q(tables_for(rho, three_qubit_settings()))
        assert np.abs(got - rho).max() <= 1e-12

    def test_w_marginals_exact(self):
        rho = outer(w_vector())
        for keep in ([0, 1], [1, 2]):
            marg = partial_trace(rho, keep)
            got = reconstruct_2q(tables_for(marg, two_qubit_settings()))
            assert np.abs(got - marg).max() <= 1e-12

    def test_random_states_both_schemes(self, rng):
        for _ in range(25):
            rho3 = random_density(8, rng)
            got3 = reconstruct_3q(tables_for(rho3, three_qubit_settings()))
            assert np.abs(got3 - rho3).max() <= 1e-10
            rho2 = random_density(4, rng)
            got2 = reconstruct_2q(tables_for(rho2, two_qubit_settings()))
            assert np.abs(got2 - rho2).max() <= 1e-10

    def test_output_hermitian_unit_trace_on_noisy_input(self, rng):
        tables = tables_for(outer(w_vector()), three_qubit_settings())
        noisy = {l: np.clip(p + rng.normal(0, 0.01, size=8), 0, None) for l, p in tables.items()}
        noisy = {l: p / p.sum() for l, p in noisy.items()}
        rho = reconstruct_3q(noisy)
        assert np.abs(rho - rho.conj().T).max() <= 1e-12
        assert abs(np.trace(rho) - 1.0) <= 1e-12

    def test_missing_table_raises(self):
        tables = tables_for(outer(w_vector()), three_qubit_settings())
        tables.pop("CXXZ_BC")
        with pytest.raises(ValueError):
            reconstruct_3q(tables)

    def test_wrong_length_table_raises(self):
        tables = tables_for(outer(w_vector()), three_qubit_settings())
        tables["ZZZ"] = tables["ZZZ"][:4]
        with pytest.raises(ValueError):
            reconstruct_3q(tables)


class TestExtractionRule:
    def test_apply_is_linear_combination(self):
        rule = ExtractionRule((0, 1), "re", (("ZZ", 0, 0.5), ("ZZ", 3, -0.5)))
        tables = {"ZZ": np.array([0.4, 0.1, 0.1, 0.4])}
        assert rule.apply(tables) == pytest.approx(0.0)


class TestLsqReconstruct:
    def test_agrees_with_closed_form_on_exact_data(self, rng):
        scheme = two_qubit_scheme()
        rho = random_density(4, rng)
        tables = tables_for(rho, two_qubit_settings())
        assert np.abs(lsq_reconstruct(scheme, tables) - rho).max() <= 1e-9

    def test_three_qubit_exact(self, rng):
        scheme = three_qubit_scheme()
        rho = random_density(8, rng)
        tables = tables_for(rho, three_qubit_settings())
        assert np.abs(lsq_reconstruct(scheme, tables) - rho).max() <= 1e-8

    def test_output_constraints_on_noisy_data(self, rng):
        scheme = two_qubit_scheme()
        tables = tables_for(random_density(4, rng), two_qubit_settings())
        noisy = {l: np.clip(p + rng.normal(0, 0.02, 4), 0, None) for l, p in tables.items()}
        noisy = {l: p / p.sum() for l, p in noisy.items()}
        rho = lsq_reconstruct(scheme, noisy)
        assert np.abs(rho - rho.conj().T).max() <= 1e-10
        assert abs(np.trace(rho) - 1.0) <= 1e-10


class TestSerialization:
    def test_json_roundtrip(self, rng, tmp_path):
        rho = random_density(8, rng)
        path = tmp_path / "rho.json"
        save_density(rho, path)
        assert np.abs(load_density(path) - rho).max() <= 1e-15

    def test_dict_roundtrip(self, rng):
        rho = random_density(4, rng)
        assert np.allclose(density_from_json_dict(density_to_json_dict(rho)), rho)

    def test_shape_mismatch_rejected(self):
        d = density_to_json_dict(np.eye(4) / 4)
        d["nqubits"] = 3
        with pytest.raises(ValueError):
            density_from_json_dict(d)
