"""Upper bounds on the convex-roof extension of E_T to mixed states.

Every ensemble {p_i, |psi_i>} of rho with m members is obtained by mixing
the sqrt(lambda)-scaled eigenvectors of rho with an m x r isometry U:

    sqrt(p_i) |psi_i> = sum_j U[i, j] sqrt(lambda_j) |v_j>.

Since ||T|| of an unnormalized vector scales with its squared norm, the
ensemble average is sum_i ||T(sqrt(p_i) psi_i)|| - 1, with no division by
small weights. The search runs over unconstrained complex m x r matrices
mapped onto isometries by their polar factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .sampling import rng_from
from .state import ContractViolation, DensityMatrix, PureState
from .tensor import _dense_strings, batch_correlation_norms

ROOF_CAP = 4
EIG_CUTOFF = 1e-12


@dataclass(frozen=True)
class Decomposition:
    weights: np.ndarray
    states: tuple

    def reconstruct(self) -> np.ndarray:
        return sum(p * np.outer(s.amplitudes, s.amplitudes.conj()) for p, s in zip(self.weights, self.states))

    def average_e_t(self) -> float:
        vecs = np.array([s.amplitudes for s in self.states])
        return float(np.dot(self.weights, batch_correlation_norms(vecs) - 1))


@dataclass
class RoofConfig:
    ensemble_size: Optional[int] = None  # default 2 * rank
    restarts: int = 32
    seed: int = 0
    method: str = "L-BFGS-B"  # or "Powell"
    maxfev: int = 20000
    ftol: float = 1e-15


@dataclass
class RoofEstimate:
    """An upper bound on the convex roof, with the ensemble attaining it."""

    value: float
    decomposition: Decomposition
    restarts_used: int
    converged: bool
    spectral_value: float = float("nan")
    upper_bound: bool = field(default=True, init=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "upper_bound": True,
            "spectral_value": self.spectral_value,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "weights": [float(p) for p in self.decomposition.weights],
            "states": [[[float(z.real), float(z.imag)] for z in s.amplitudes] for s in self.decomposition.states],
        }


def _spectral_frame(rho: DensityMatrix) -> np.ndarray:
    """Columns sqrt(lambda_j) v_j for the nonzero part of the spectrum."""
    if rho.num_qubits > ROOF_CAP:
        raise ContractViolation(f"convex roof limited to {ROOF_CAP} qubits")
    vals, vecs = np.linalg.eigh(rho.matrix)
    keep = vals > EIG_CUTOFF
    return vecs[:, keep] * np.sqrt(vals[keep])


def _polar(z: np.ndarray) -> np.ndarray:
    a, _, bh = np.linalg.svd(z, full_matrices=False)
    return a @ bh


def _ensemble_vectors(frame: np.ndarray, u: np.ndarray) -> np.ndarray:
    # row i is sqrt(p_i) psi_i
    return u @ frame.T


def ensemble_average(frame: np.ndarray, u: np.ndarray) -> float:
    vecs = _ensemble_vectors(frame, u)
    weights = np.sum(np.abs(vecs) ** 2, axis=1)
    return float(np.sum(batch_correlation_norms(vecs)) - np.sum(weights))


def _decomposition(frame: np.ndarray, u: np.ndarray) -> Decomposition:
    vecs = _ensemble_vectors(frame, u)
    weights = np.sum(np.abs(vecs) ** 2, axis=1)
    keep = weights > 1e-15
    states = tuple(PureState.from_amplitudes(v / np.sqrt(w)) for v, w in zip(vecs[keep], weights[keep]))
    w = weights[keep]
    return Decomposition(w / w.sum(), states)


def _objective_kernel(frame: np.ndarray):
    """Fast ensemble average for one fixed rho; strings applied as one matmul."""
    d, r = frame.shape
    n = int(round(np.log2(d)))
    strings = _dense_strings(n, (1, 2, 3)).reshape(-1, d)
    total_weight = float(np.sum(np.abs(frame) ** 2))

    def average(u: np.ndarray) -> float:
        vecs_t = frame @ u.T  # column i is sqrt(p_i) psi_i
        w = (strings @ vecs_t).reshape(-1, d, vecs_t.shape[1])
        t = np.einsum("aim,im->am", w, vecs_t.conj()).real
        return float(np.sum(np.sqrt(np.sum(t * t, axis=0)))) - total_weight

    return average


def _unpack(x: np.ndarray, m: int, r: int) -> np.ndarray:
    return (x[: m * r] + 1j * x[m * r :]).reshape(m, r)


def _pack(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real.ravel(), z.imag.ravel()])


def _options(config: RoofConfig) -> dict:
    if config.method == "L-BFGS-B":
        # gradients by finite differences of the objective
        return {"ftol": config.ftol, "gtol": 1e-10, "maxfun": config.maxfev}
    if config.method == "Powell":
        return {"xtol": 1e-8, "ftol": config.ftol, "maxfev": config.maxfev}
    raise ContractViolation(f"unsupported local search {config.method!r}")


def roof_estimate(rho: DensityMatrix, config: RoofConfig | None = None) -> RoofEstimate:
    """Multi-restart local search over ensembles of ``rho``.

    Restart 0 starts from the eigen-ensemble, so the result never exceeds
    the spectral-decomposition value. Restarts are seeded deterministically.
    """
    config = config or RoofConfig()
    frame = _spectral_frame(rho)
    r = frame.shape[1]
    m = config.ensemble_size or 2 * r
    if m < r:
        raise ContractViolation(f"ensemble size {m} below the rank {r}")

    start = np.zeros((m, r), dtype=complex)
    start[:r, :r] = np.eye(r)
    spectral = ensemble_average(frame, start)
    if r == 1:
        return RoofEstimate(spectral, _decomposition(frame, start[:1]), 0, True, spectral)

    average = _objective_kernel(frame)

    def objective(x):
        return average(_polar(_unpack(x, m, r)))

    rng = rng_from(config.seed)
    best_val, best_u, best_ok = spectral, start, True
    for k in range(config.restarts):
        if k == 0:
            z0 = start
        else:
            z0 = rng.normal(size=(m, r)) + 1j * rng.normal(size=(m, r))
        res = minimize(objective, _pack(z0), method=config.method, options=_options(config))
        if res.fun < best_val:
            best_val, best_u, best_ok = float(res.fun), _polar(_unpack(res.x, m, r)), bool(res.success)
    return RoofEstimate(best_val, _decomposition(frame, best_u), config.restarts, best_ok, spectral)


def random_search_bound(rho: DensityMatrix, samples: int = 10_000, ensemble_size: Optional[int] = None, seed=0) -> float:
    """Best ensemble average over Haar-random isometries; an independent
    sampling check on :func:`roof_estimate`."""
    frame = _spectral_frame(rho)
    r = frame.shape[1]
    m = ensemble_size or 2 * r
    rng = rng_from(seed)
    best = np.inf
    chunk = 500
    for start in range(0, samples, chunk):
        b = min(chunk, samples - start)
        z = rng.normal(size=(b, m, r)) + 1j * rng.normal(size=(b, m, r))
        a, _, bh = np.linalg.svd(z, full_matrices=False)
        vecs = (a @ bh) @ frame.T  # (b, m, d)
        norms = batch_correlation_norms(vecs.reshape(b * m, -1)).reshape(b, m)
        vals = norms.sum(axis=1) - np.sum(np.abs(vecs) ** 2, axis=(1, 2))
        best = min(best, float(vals.min()))
    return best


def mixture(rhos: Sequence[DensityMatrix], weights: Sequence[float]) -> DensityMatrix:
    dims = {r.matrix.shape for r in rhos}
    if len(dims) != 1:
        raise ContractViolation("density matrices of different dimensions")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise ContractViolation("weights must be a probability vector")
    return DensityMatrix(rhos[0].qubit_labels, sum(p * r.matrix for p, r in zip(w, rhos)))


def convexity_check(rhos: Sequence[DensityMatrix], weights: Sequence[float], config: RoofConfig | None = None):
    """(sum_i w_i E(rho_i), E(sum_i w_i rho_i)) from roof estimates."""
    mixed = mixture(rhos, weights)
    lhs = float(sum(w * roof_estimate(r, config).value for w, r in zip(weights, rhos)))
    rhs = roof_estimate(mixed, config).value
    return lhs, rhs


def two_qubit_roof_exact(rho: DensityMatrix) -> float:
    """Exact two-qubit roof, sqrt(1 + 2 C(rho)^2) - 1 with Wootters' concurrence.

    For two qubits E_T = f(C) with f convex and increasing, and rho has an
    optimal ensemble of equal-concurrence states, so the roof is f(C(rho)).
    """
    if rho.num_qubits != 2:
        raise ContractViolation("two-qubit density matrix required")
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    m = rho.matrix
    r = m @ yy @ m.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    c = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return float(np.sqrt(1 + 2 * c * c) - 1)
