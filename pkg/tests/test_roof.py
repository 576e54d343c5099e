import numpy as np
import pytest

from blochent import families as fam
from blochent.measure import e_t_value
from blochent.monotonicity import diagonal_kraus_pair
from blochent.roof import (
    RoofConfig,
    convexity_check,
    mixture,
    random_search_bound,
    roof_estimate,
    two_qubit_roof_exact,
)
from blochent.sampling import haar_state, random_unitary
from blochent.state import ContractViolation, DensityMatrix, PureState, apply_kraus, partial_trace
from blochent.verify import _random_rank2, _separable_mixture

FAST = RoofConfig(restarts=8, seed=3)


def _dm(psi):
    return psi.density_matrix()


def test_pure_state_is_exact():
    psi = haar_state(3, 2)
    est = roof_estimate(_dm(psi), FAST)
    assert est.value == pytest.approx(e_t_value(psi), abs=1e-8)
    assert est.restarts_used == 0


def test_separable_mixture_reaches_zero():
    est = roof_estimate(_separable_mixture(7), FAST)
    assert est.value <= 1e-6
    assert est.value >= -1e-8


@pytest.mark.parametrize("seed", range(4))
def test_rank2_matches_exact_two_qubit_roof(seed):
    rho = _random_rank2(seed)
    est = roof_estimate(rho, FAST)
    exact = two_qubit_roof_exact(rho)
    assert exact - 1e-8 <= est.value <= exact + 1e-6
    assert est.value <= est.spectral_value + 1e-9


def test_beats_random_search():
    rho = _random_rank2(11)
    assert roof_estimate(rho, FAST).value <= random_search_bound(rho, 2000, seed=1) + 1e-6


def test_decomposition_reconstructs_rho():
    rho = _random_rank2(5)
    est = roof_estimate(rho, FAST)
    dec = est.decomposition
    assert np.max(np.abs(dec.reconstruct() - rho.matrix)) <= 1e-8
    assert dec.weights.sum() == pytest.approx(1.0)
    assert np.all(dec.weights > 0)
    assert dec.average_e_t() == pytest.approx(est.value, abs=1e-10)


def test_report_is_an_upper_bound():
    est = roof_estimate(_random_rank2(1), FAST)
    d = est.to_dict()
    assert d["upper_bound"] is True
    assert len(d["states"]) == len(d["weights"])
    assert all(len(z) == 2 for z in d["states"][0])


def test_local_unitary_invariance():
    rho = _random_rank2(8)
    u = np.kron(random_unitary(1), random_unitary(2))
    rotated = DensityMatrix.from_matrix(u @ rho.matrix @ u.conj().T)
    assert roof_estimate(rotated, FAST).value == pytest.approx(roof_estimate(rho, FAST).value, abs=1e-4)


def test_deterministic_given_seed():
    rho = _random_rank2(9)
    assert roof_estimate(rho, FAST).value == roof_estimate(rho, FAST).value


def test_powell_variant_runs():
    rho = _random_rank2(2)
    est = roof_estimate(rho, RoofConfig(restarts=2, method="Powell", maxfev=3000))
    assert est.value <= est.spectral_value + 1e-9


class TestConvexity:
    def test_identical_states(self):
        rho = _random_rank2(4)
        lhs, rhs = convexity_check([rho, rho], [0.5, 0.5], FAST)
        assert rhs == pytest.approx(lhs, abs=1e-4)

    def test_orthogonal_pure_states(self):
        a = fam.ghz_state(0.5, 2).amplitudes
        b = np.array([1, 0, 0, -1]) / np.sqrt(2)
        lhs, rhs = convexity_check([_dm(PureState(2, a)), _dm(PureState(2, b))], [0.5, 0.5], FAST)
        assert rhs <= lhs + 1e-4
        assert rhs == pytest.approx(0.0, abs=1e-6)

    def test_measurement_residuals(self):
        # residual two-qubit states after measuring qubit 1 of a three-qubit state
        psi = haar_state(3, 6)
        outs = [apply_kraus(psi, el) for el in diagonal_kraus_pair(1, 0.8, 0.3)]
        rhos = [partial_trace(post, [2, 3]) for _, post in outs]
        weights = [p for p, _ in outs]
        lhs, rhs = convexity_check(rhos, weights, FAST)
        assert rhs <= lhs + 1e-4

    def test_worked_example_residual_mixture(self):
        outs = [apply_kraus(fam.bai_state(), el) for el in diagonal_kraus_pair(1, 0.9, 0.2)]
        rhos = [post.density_matrix() for _, post in outs]
        lhs, rhs = convexity_check(rhos, [p for p, _ in outs], FAST)
        assert lhs == pytest.approx(sum(p * e_t_value(post) for p, post in outs), abs=1e-8)
        assert rhs <= lhs + 1e-4


def test_preconditions():
    with pytest.raises(ContractViolation):
        roof_estimate(_dm(haar_state(5, 0)))
    with pytest.raises(ContractViolation):
        roof_estimate(_random_rank2(0), RoofConfig(ensemble_size=1))
    with pytest.raises(ContractViolation):
        mixture([_random_rank2(0), _dm(haar_state(3, 0))], [0.5, 0.5])
    with pytest.raises(ContractViolation):
        two_qubit_roof_exact(_dm(haar_state(3, 0)))
