"""Experiments on how E_T behaves under local operations: local unitaries,
single-qubit POVMs and discarding a qubit."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .measure import full_norm
from .sampling import random_unitary, rng_from
from .state import (
    ContractViolation,
    LocalOperator,
    PureState,
    ZeroProbabilityOutcome,
    apply_kraus,
    apply_local_layer,
    check_kraus_set,
    partial_trace,
)
from .tensor import correlation_tensor, tensor_norm


def lu_invariance_check(state: PureState, unitaries: Sequence[np.ndarray]):
    """||T^(N)|| before and after one local unitary per qubit."""
    before = full_norm(state)
    after = full_norm(apply_local_layer(state, unitaries))
    return before, after


@dataclass
class PovmExperimentReport:
    input_e_t: float
    outcomes: list  # (probability, e_t) per Kraus element
    expected_e_t: float
    gap: float
    seed: Optional[int] = None
    unnormalized_residual_e_t: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "input_e_t": self.input_e_t,
            "outcomes": [{"probability": p, "e_t": e} for p, e in self.outcomes],
            "expected_e_t": self.expected_e_t,
            "gap": self.gap,
            "seed": self.seed,
        }


def povm_experiment(state: PureState, kraus_set: Sequence[LocalOperator], seed: Optional[int] = None) -> PovmExperimentReport:
    """Measure one qubit with a complete set of normal Kraus elements and
    compare E_T of the input with the expected E_T of the outcomes.

    ``unnormalized_residual_e_t`` holds ||T(L|psi>)|| - 1 per outcome, i.e. the
    measure evaluated on the *unnormalized* post-measurement vector. It is
    not a quantity the monotonicity inequality is about; it is kept for
    comparison with published tables that used it.
    """
    check_kraus_set(kraus_set)
    e_in = full_norm(state) - 1
    outcomes = []
    raw = []
    for el in kraus_set:
        try:
            p, post = apply_kraus(state, el)
        except ZeroProbabilityOutcome:
            outcomes.append((0.0, 0.0))
            raw.append(-1.0)
            continue
        nrm = full_norm(post)
        outcomes.append((p, nrm - 1))
        raw.append(p * nrm - 1)
    total_p = math.fsum(p for p, _ in outcomes)
    if abs(total_p - 1) > 1e-10:
        raise ContractViolation(f"outcome probabilities sum to {total_p}")
    expected = math.fsum(p * e for p, e in outcomes)
    return PovmExperimentReport(e_in, outcomes, expected, e_in - expected, seed, raw)


def diagonal_kraus_pair(qubit: int, alpha: float, beta: float, u1=None, u2=None, v=None) -> list[LocalOperator]:
    """{U1 diag(alpha, beta) V, U2 diag(sqrt(1-alpha^2), sqrt(1-beta^2)) V}.

    Identity U1, U2, V by default. Only normal elements pass validation.
    """
    if not (0 <= alpha <= 1 and 0 <= beta <= 1):
        raise ContractViolation("alpha and beta must lie in [0, 1]")
    eye = np.eye(2)
    u1 = eye if u1 is None else u1
    u2 = eye if u2 is None else u2
    v = eye if v is None else v
    a1 = u1 @ np.diag([alpha, beta]) @ v
    a2 = u2 @ np.diag([math.sqrt(1 - alpha**2), math.sqrt(1 - beta**2)]) @ v
    return [LocalOperator(qubit, a1, "kraus"), LocalOperator(qubit, a2, "kraus")]


def random_normal_kraus_pair(qubit: int, seed=None) -> list[LocalOperator]:
    """A diagonal pair rotated into a random eigenbasis W (U1 = U2 = W, V = W^dag),
    which keeps both elements normal and the set complete."""
    rng = rng_from(seed)
    alpha, beta = rng.uniform(0, 1, size=2)
    w = random_unitary(rng)
    return diagonal_kraus_pair(qubit, alpha, beta, u1=w, u2=w, v=w.conj().T)


def trace_out_comparison(state: PureState, qubit: int):
    """(||T^(N)|| of the state, ||T^(N-1)|| of the state with ``qubit`` discarded)."""
    n = state.num_qubits
    if n < 2:
        raise ContractViolation("need at least two qubits")
    if not 1 <= qubit <= n:
        raise ContractViolation(f"qubit {qubit} out of range")
    keep = [k for k in range(1, n + 1) if k != qubit]
    reduced = partial_trace(state, keep)
    return full_norm(state), tensor_norm(correlation_tensor(reduced))
