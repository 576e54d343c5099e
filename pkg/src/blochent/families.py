"""Named N-qubit states: GHZ, W, their superpositions, Heisenberg-chain
eigenstates, Dicke states and a few fixed examples."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .state import ContractViolation, PureState


def _unit_interval(name: str, x: float):
    if not 0.0 <= x <= 1.0:
        raise ContractViolation(f"{name} = {x} outside [0, 1]")


def ghz_state(p: float, n: int) -> PureState:
    """sqrt(p)|0...0> + sqrt(1-p)|1...1>."""
    _unit_interval("p", p)
    if n < 2:
        raise ContractViolation("GHZ states need N >= 2")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = math.sqrt(p)
    amps[-1] = math.sqrt(1.0 - p)
    return PureState(n, amps)


def _single_flip_indices(n: int, hole: bool) -> list[int]:
    full = 2**n - 1
    return [(full ^ (1 << (n - 1 - j))) if hole else (1 << (n - 1 - j)) for j in range(n)]


def w_state(n: int) -> PureState:
    if n < 3:
        raise ContractViolation("W states need N >= 3")
    amps = np.zeros(2**n, dtype=complex)
    amps[_single_flip_indices(n, hole=False)] = 1 / math.sqrt(n)
    return PureState(n, amps)


def w_tilde_state(n: int) -> PureState:
    """Single-hole counterpart of the W state (sigma_x on every qubit)."""
    if n < 3:
        raise ContractViolation("W states need N >= 3")
    amps = np.zeros(2**n, dtype=complex)
    amps[_single_flip_indices(n, hole=True)] = 1 / math.sqrt(n)
    return PureState(n, amps)


def w_superposition(s: float, phi: float, n: int) -> PureState:
    """sqrt(s)|W> + sqrt(1-s) e^{i phi} |W~>."""
    _unit_interval("s", s)
    amps = math.sqrt(s) * w_state(n).amplitudes
    amps = amps + math.sqrt(1 - s) * np.exp(1j * phi) * w_tilde_state(n).amplitudes
    return PureState(n, amps)


def ghz_w_superposition(s: float, phi: float, n: int = 3) -> PureState:
    """sqrt(s)|GHZ> + sqrt(1-s) e^{i phi}|W> with the p = 1/2 GHZ state."""
    _unit_interval("s", s)
    amps = math.sqrt(s) * ghz_state(0.5, n).amplitudes
    amps = amps + math.sqrt(1 - s) * np.exp(1j * phi) * w_state(n).amplitudes
    return PureState(n, amps)


def heisenberg_eigenstate(n: int, m: int) -> PureState:
    """One-magnon eigenstate of the periodic Heisenberg ring, k = 2 pi m / N.
    The excitation at qubit j (counted from 0) carries phase e^{i k j}."""
    if n < 3:
        raise ContractViolation("need N >= 3")
    if not 0 <= m <= n - 1:
        raise ContractViolation(f"m = {m} outside 0..{n - 1}")
    k = 2 * math.pi * m / n
    amps = np.zeros(2**n, dtype=complex)
    for j, idx in enumerate(_single_flip_indices(n, hole=False)):
        amps[idx] = np.exp(1j * k * j) / math.sqrt(n)
    return PureState(n, amps)


def dicke_state(n: int, s: int) -> PureState:
    """Uniform superposition of all weight-s basis states."""
    if n < 1 or not 0 <= s <= n:
        raise ContractViolation(f"need 0 <= s <= N, got s = {s}, N = {n}")
    idx = np.arange(2**n)
    weight = np.zeros_like(idx)
    for q in range(n):
        weight += (idx >> q) & 1
    amps = np.where(weight == s, 1.0 / math.sqrt(math.comb(n, s)), 0.0).astype(complex)
    return PureState(n, amps)


def dicke_coefficients(n: int, s: int) -> np.ndarray:
    """The Dicke state psi_N(s) in the symmetric (Dicke) basis."""
    if n < 1 or not 0 <= s <= n:
        raise ContractViolation(f"need 0 <= s <= N, got s = {s}, N = {n}")
    c = np.zeros(n + 1, dtype=complex)
    c[s] = 1.0
    return c


def bai_state() -> PureState:
    """(|0000> + |0011> + |0101> + |0110> + |1010> + |1111>)/sqrt(6)."""
    amps = np.zeros(16, dtype=complex)
    for word in ("0000", "0011", "0101", "0110", "1010", "1111"):
        amps[int(word, 2)] = 1 / math.sqrt(6)
    return PureState(4, amps)


def schmidt3_state(lambdas: Sequence[float], phi: float = 0.0) -> PureState:
    """l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (5,) or np.any(lam < 0):
        raise ContractViolation("need five non-negative Schmidt coefficients")
    if abs(np.sum(lam**2) - 1.0) > 1e-12:
        raise ContractViolation("Schmidt coefficients are not normalized")
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = lam[0]
    amps[0b100] = lam[1] * np.exp(1j * phi)
    amps[0b101] = lam[2]
    amps[0b110] = lam[3]
    amps[0b111] = lam[4]
    return PureState(3, amps)


def product_of(qubits: Sequence[np.ndarray]) -> PureState:
    amps = np.ones(1, dtype=complex)
    for q in qubits:
        amps = np.kron(amps, np.asarray(q, dtype=complex))
    return PureState(len(qubits), amps / np.linalg.norm(amps))


def ghz_pairs_form_of_psi42() -> PureState:
    """psi_4(2) written as an equal superposition of three 4-qubit GHZ-like pairs."""
    amps = np.zeros(16, dtype=complex)
    for a, b in (("0011", "1100"), ("0101", "1010"), ("1001", "0110")):
        amps[int(a, 2)] += 1 / math.sqrt(3) / math.sqrt(2)
        amps[int(b, 2)] += 1 / math.sqrt(3) / math.sqrt(2)
    return PureState(4, amps)


@dataclass(frozen=True)
class Family:
    name: str
    build: Callable[..., PureState]
    params: tuple
    symmetric: bool = False


def _dicke_from_params(qubits, s):
    if float(s) != int(s):
        raise ContractViolation(f"Dicke excitation number must be an integer, got {s}")
    return dicke_state(int(qubits), int(s))


FAMILIES = {
    "ghz": Family("ghz", lambda p, qubits: ghz_state(p, int(qubits)), ("p", "qubits")),
    "w": Family("w", lambda qubits: w_state(int(qubits)), ("qubits",), symmetric=True),
    "wtilde": Family("wtilde", lambda qubits: w_tilde_state(int(qubits)), ("qubits",), symmetric=True),
    "wsup": Family(
        "wsup", lambda s, phi, qubits: w_superposition(s, phi, int(qubits)), ("s", "phi", "qubits")
    ),
    "ghzw": Family("ghzw", lambda s, phi: ghz_w_superposition(s, phi), ("s", "phi")),
    "heis-k": Family("heis-k", lambda qubits, m: heisenberg_eigenstate(int(qubits), int(m)), ("qubits", "m")),
    "dicke": Family("dicke", _dicke_from_params, ("qubits", "s"), symmetric=True),
    "bai": Family("bai", lambda: bai_state(), ()),
    "schmidt3": Family("schmidt3", lambda lambdas, phi: schmidt3_state(lambdas, phi), ("lambdas", "phi")),
}

DEFAULTS = {"p": 0.5, "qubits": 3, "s": 0.5, "phi": 0.0, "m": 0, "lambdas": (1.0, 0.0, 0.0, 0.0, 0.0)}


def build(name: str, **params) -> PureState:
    """Construct a registered family member; missing parameters take DEFAULTS."""
    try:
        fam = FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    args = [params[k] if params.get(k) is not None else DEFAULTS[k] for k in fam.params]
    return fam.build(*args)
