"""E_T along the iterations of Grover search with one marked item."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measure import full_norm, r_n
from .state import ContractViolation, PureState
from .tensor import GENERIC_CAP, ResourceLimitError


@dataclass
class GroverTrace:
    n_qubits: int
    target: int
    rows: list = field(default_factory=list)  # (iteration, e_t, success_prob)

    @property
    def e_t(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows])

    @property
    def success_prob(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows])

    def normalized_e_t(self) -> np.ndarray:
        return self.e_t / r_n(self.n_qubits)


def grover_states(n: int, target: int, iterations: int):
    """Yield the state after 0, 1, ..., ``iterations`` Grover steps.

    One step is the oracle phase flip on ``target`` followed by the
    reflection about the uniform superposition, 2|u><u| - I.
    """
    dim = 2**n
    if not 0 <= target < dim:
        raise ContractViolation(f"target {target} outside 0..{dim - 1}")
    if iterations < 0:
        raise ContractViolation("iterations must be non-negative")
    psi = np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    yield psi.copy()
    for _ in range(iterations):
        psi[target] = -psi[target]
        # rank-one reflection about the mean
        psi = 2 * psi.mean() - psi
        yield psi.copy()


def grover_run(n: int, target: int, iterations: int, max_qubits: int = GENERIC_CAP) -> GroverTrace:
    if n > max_qubits:
        raise ResourceLimitError(f"{n} qubits exceeds the tensor cap of {max_qubits}")
    trace = GroverTrace(n, target)
    for k, psi in enumerate(grover_states(n, target, iterations)):
        state = PureState(n, psi / np.linalg.norm(psi))
        trace.rows.append((k, full_norm(state, max_qubits=max_qubits) - 1, float(abs(psi[target]) ** 2)))
    return trace


def local_maxima(x) -> list[int]:
    x = np.asarray(x)
    return [i for i in range(1, len(x) - 1) if x[i] > x[i - 1] and x[i] >= x[i + 1]]


def local_minima(x) -> list[int]:
    return local_maxima(-np.asarray(x))


def peak_alignment(trace: GroverTrace, window: int = 1) -> dict:
    """Match every interior success-probability peak with an E_T dip.

    Both the uniform start state and the marked basis state are product
    states, so E_T also dips where the success probability bottoms out;
    those dips are reported but do not count against the alignment.
    """
    peaks = local_maxima(trace.success_prob)
    dips = local_minima(trace.e_t)
    unmatched = [p for p in peaks if not any(abs(p - d) <= window for d in dips)]
    return {"success_peaks": peaks, "e_t_dips": dips, "unmatched_peaks": unmatched, "aligned": not unmatched}
