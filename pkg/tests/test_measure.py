import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blochent import families as fam
from blochent import measure as ms
from blochent.sampling import haar_state, random_product_state
from blochent.state import ContractViolation, PureState
from oracles import dense_norm, kron_all
from strategies import product_states, pure_states, seeds


class TestReport:
    def test_fields(self):
        rep = ms.e_t(fam.ghz_state(0.5, 3), normalize=True)
        assert set(rep.to_dict()) == {"norm", "e_t", "e_t_log", "normalized", "n_qubits", "elapsed_ms"}
        assert rep.e_t == pytest.approx(1.0, abs=1e-12)
        assert rep.e_t_log == pytest.approx(1.0, abs=1e-12)
        assert rep.normalized == pytest.approx(1.0, abs=1e-12)
        assert rep.n_qubits == 3

    def test_normalization_is_opt_in(self):
        assert ms.e_t(fam.w_state(3)).normalized is None

    def test_worked_example_state(self):
        rep = ms.e_t(fam.bai_state(), normalize=True)
        # the printed 0.7802 is E_T in units of R_4 = 2
        assert rep.normalized == pytest.approx(0.7802, abs=5e-4)
        assert rep.e_t == pytest.approx(2 * 0.7802, abs=1e-3)

    def test_symmetric_method(self):
        psi = fam.dicke_state(6, 3)
        assert ms.e_t_value(psi, method="symmetric") == pytest.approx(ms.e_t_value(psi), abs=1e-10)

    def test_unknown_method(self):
        with pytest.raises(ContractViolation):
            ms.e_t(fam.w_state(3), method="magic")

    @given(product_states(max_qubits=5))
    def test_product_states_have_zero_e_t(self, psi):
        assert abs(ms.e_t_value(psi)) < 1e-9

    @given(pure_states(min_qubits=2, max_qubits=5))
    def test_norm_at_least_one(self, psi):
        assert ms.full_norm(psi) >= 1 - 1e-9

    @given(pure_states(max_qubits=4))
    def test_matches_dense_norm(self, psi):
        assert ms.full_norm(psi) == pytest.approx(dense_norm(psi.amplitudes), abs=1e-12)

    def test_mixed_input_gives_mixed_norm(self):
        rho = fam.ghz_state(0.5, 3).density_matrix()
        assert ms.e_t_value(rho) == pytest.approx(1.0)


class TestGhzNormalization:
    @pytest.mark.parametrize("n,want", [(2, math.sqrt(3) - 1), (3, 1.0), (4, 2.0)])
    def test_values(self, n, want):
        assert ms.r_n(n) == pytest.approx(want, abs=1e-14)

    def test_rejects_small_n(self):
        with pytest.raises(ContractViolation):
            ms.r_n(1)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_is_ghz_e_t(self, n):
        assert ms.e_t_value(fam.ghz_state(0.5, n)) == pytest.approx(ms.r_n(n), abs=1e-9)


class TestGhzClosedForm:
    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_zero_at_p0(self, n):
        assert ms.ghz_closed_form(0.0, n) == 0.0

    def test_n3_half(self):
        assert ms.ghz_closed_form(0.5, 3) == pytest.approx(1.0)

    def test_n2_concurrence(self):
        assert ms.ghz_closed_form(0.5, 2) == pytest.approx(math.sqrt(3) - 1)
        assert ms.concurrence_relation(0.5) == pytest.approx(math.sqrt(3) - 1)

    def test_range(self):
        with pytest.raises(ContractViolation):
            ms.ghz_closed_form(1.5, 3)

    @given(st.floats(0, 1), st.sampled_from([2, 3, 4, 5, 6]))
    def test_matches_brute_force(self, p, n):
        assert ms.ghz_closed_form(p, n) == pytest.approx(ms.e_t_value(fam.ghz_state(p, n)), abs=1e-9)

    @given(st.floats(0, 1))
    def test_symmetric_in_p(self, p):
        assert ms.ghz_closed_form(p, 3) == pytest.approx(ms.ghz_closed_form(1 - p, 3), abs=1e-12)


class TestWClosedForm:
    def test_values(self):
        assert ms.w_closed_form(3) == pytest.approx(math.sqrt(11 / 3) - 1, abs=1e-12)
        assert ms.w_closed_form(3) == pytest.approx(0.914854, abs=1e-6)
        assert ms.w_closed_form(4) == pytest.approx(1.0)

    def test_monotone_towards_limit(self):
        vals = [ms.w_closed_form(n) for n in range(3, 51)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < math.sqrt(5) - 1

    def test_range(self):
        with pytest.raises(ContractViolation):
            ms.w_closed_form(2)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_matches_brute_force(self, n):
        assert ms.w_closed_form(n) == pytest.approx(ms.e_t_value(fam.w_state(n)), abs=1e-9)


class TestGhzWClosedForm:
    def test_endpoints(self):
        assert ms.wghz_closed_form(1.0) == pytest.approx(1.0)
        assert ms.wghz_closed_form(0.0) == pytest.approx(math.sqrt(11 / 3) - 1)

    def test_phase_independent(self):
        a = ms.e_t_value(fam.ghz_w_superposition(0.5, 0.0))
        b = ms.e_t_value(fam.ghz_w_superposition(0.5, math.pi / 2))
        assert a == pytest.approx(b, abs=1e-12)

    @given(st.floats(0, 1), st.floats(0, 2 * math.pi))
    def test_matches_brute_force(self, s, phi):
        assert ms.wghz_closed_form(s) == pytest.approx(ms.e_t_value(fam.ghz_w_superposition(s, phi)), abs=1e-9)


class TestTwoQubitForms:
    def test_basis_state(self):
        assert ms.two_qubit_closed_form(1, 0, 0, 0) == 0.0

    def test_bell(self):
        r = 1 / math.sqrt(2)
        assert ms.two_qubit_closed_form(r, 0, 0, r) == pytest.approx(math.sqrt(3) - 1)

    def test_unnormalized_rejected(self):
        with pytest.raises(ContractViolation):
            ms.two_qubit_closed_form(1, 1, 0, 0)

    @given(seeds)
    def test_absolute_value_form_exact_for_aligned_phases(self, seed):
        a = np.abs(haar_state(2, seed).amplitudes) * np.exp(1j * 0.4)
        want = ms.e_t_value(PureState(2, a))
        assert ms.two_qubit_closed_form(*a) == pytest.approx(want, abs=1e-9)

    @given(seeds)
    def test_concurrence_form_exact(self, seed):
        a = haar_state(2, seed).amplitudes
        assert ms.two_qubit_concurrence_form(*a) == pytest.approx(ms.e_t_value(PureState(2, a)), abs=1e-9)

    @given(seeds)
    def test_absolute_value_form_is_a_lower_bound(self, seed):
        a = haar_state(2, seed).amplitudes
        assert ms.two_qubit_closed_form(*a) <= ms.e_t_value(PureState(2, a)) + 1e-12

    def test_equal_moduli_do_not_imply_product(self):
        # |a2 a3| = |a1 a4| but a1 a4 - a2 a3 = -1/2: a maximally entangled state
        a = np.array([1, 1, 1, -1]) / 2
        assert ms.two_qubit_closed_form(*a) == 0.0
        assert ms.e_t_value(PureState(2, a)) == pytest.approx(math.sqrt(3) - 1)

    @given(seeds)
    def test_product_iff_determinant_vanishes(self, seed):
        psi = random_product_state(2, seed)
        a = psi.amplitudes
        assert abs(a[0] * a[3] - a[1] * a[2]) < 1e-12
        assert ms.two_qubit_concurrence_form(*a) == pytest.approx(0.0, abs=1e-12)


class TestConcurrenceRelation:
    def test_values(self):
        assert ms.concurrence_relation(0.0) == 0.0
        assert ms.concurrence_relation(0.25) == pytest.approx(math.sqrt(2.5) - 1)

    @given(st.floats(0, 1))
    def test_equals_two_qubit_ghz(self, p):
        assert ms.concurrence_relation(p) == pytest.approx(ms.ghz_closed_form(p, 2), abs=1e-12)


class TestDickeNormFormula:
    def test_s0(self):
        assert ms.heisenberg_norm_formula(6, 0) == 1.0

    def test_odd_n_rejected(self):
        with pytest.raises(ContractViolation):
            ms.heisenberg_norm_formula(5, 2)

    @pytest.mark.parametrize("n,s", [(4, 2), (6, 3), (4, 1), (6, 2)])
    def test_agrees_with_brute_force_at_small_n(self, n, s):
        chk = ms.check_heisenberg_formula(n, s)
        assert not chk.mismatch

    def test_flagged_where_it_drifts(self):
        chk = ms.check_heisenberg_formula(8, 4)
        assert chk.mismatch
        assert chk.to_dict()["brute_force"] == pytest.approx(101.5714285714, abs=1e-8)

    def test_exceeds_purity_bound_at_large_n(self):
        # ||T^(N)||^2 <= 2^N for every pure state; the printed formula breaks it
        assert ms.heisenberg_norm_formula(100, 50) > 2.0**100


class TestSchmidtBound:
    @given(seeds, st.floats(0, 2 * math.pi))
    def test_holds(self, seed, phi):
        lam = np.abs(np.random.default_rng(seed).normal(size=5))
        lam /= np.linalg.norm(lam)
        norm2 = ms.full_norm(fam.schmidt3_state(lam, phi)) ** 2
        assert norm2 >= ms.schmidt3_lower_bound(lam) - 1e-9

    def test_product_condition(self):
        # lambda_0 = 0 and lambda_1 lambda_4 = lambda_2 lambda_3
        lam = np.array([0, 0.3, 0.6, 0.2, 0.4])
        lam /= np.linalg.norm(lam)
        assert ms.e_t_value(fam.schmidt3_state(lam)) == pytest.approx(0.0, abs=1e-9)


class TestAdditivity:
    @given(pure_states(min_qubits=1, max_qubits=3), pure_states(min_qubits=1, max_qubits=3))
    def test_multiplicative_norm_and_additive_log(self, a, b):
        ab = a.tensor(b)
        na, nb, nab = ms.full_norm(a), ms.full_norm(b), ms.full_norm(ab)
        assert nab == pytest.approx(na * nb, abs=1e-8)
        assert ms.e_t_log(ab) == pytest.approx(ms.e_t_log(a) + ms.e_t_log(b), abs=1e-9)
        assert ms.e_t_value(ab) >= ms.e_t_value(a) + ms.e_t_value(b) - 1e-9

    @given(pure_states(min_qubits=2, max_qubits=3))
    def test_two_copies(self, psi):
        n = ms.full_norm(psi)
        assert ms.full_norm(psi.tensor(psi)) == pytest.approx(n * n, abs=1e-8)
        assert ms.e_t_value(psi.tensor(psi)) >= ms.e_t_value(psi) - 1e-12

    @given(pure_states(min_qubits=2, max_qubits=4), seeds)
    def test_continuity(self, psi, seed):
        rng = np.random.default_rng(seed)
        delta = rng.normal(size=psi.dim) + 1j * rng.normal(size=psi.dim)
        delta *= 1e-4 * rng.uniform() / np.linalg.norm(delta)
        other = PureState.from_amplitudes(psi.amplitudes + delta, normalize=True)
        bound = 10 * math.sqrt(3**psi.num_qubits) * 1e-4
        assert abs(ms.e_t_value(psi) - ms.e_t_value(other)) <= bound


def test_dicke_report_at_large_n():
    rep = ms.e_t_dicke(fam.dicke_coefficients(100, 50), normalize=True)
    assert rep.n_qubits == 100
    assert rep.norm**2 <= 2.0**100
    assert rep.normalized == pytest.approx(rep.e_t / ms.r_n(100))


def test_kron_oracle_product_state():
    v = kron_all([[1, 0], [0.6, 0.8]])
    assert ms.e_t_value(PureState(2, v)) == pytest.approx(0.0, abs=1e-12)
