"""Pure states, density matrices and local operations on N qubits.

Qubits are labelled 1..N. Qubit 1 is the leftmost tensor factor, i.e. the
most significant bit of the computational-basis index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
IMAG_TOL = 1e-9
ZERO_PROB = 1e-12

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


class ContractViolation(ValueError):
    """An argument breaks an operation's precondition."""


class NumericalIntegrityError(ArithmeticError):
    """A quantity that must be real came out with a sizeable imaginary part."""


class ZeroProbabilityOutcome(ArithmeticError):
    """A measurement outcome has (numerically) zero probability."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if self.num_qubits < 1:
            raise ContractViolation("need at least one qubit")
        if amps.size != 2**self.num_qubits:
            raise ContractViolation(
                f"{amps.size} amplitudes for {self.num_qubits} qubits"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ContractViolation(f"state not normalized (norm^2 = {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(round(np.log2(amps.size)))
        if 2**n != amps.size:
            raise ContractViolation(f"length {amps.size} is not a power of two")
        if normalize:
            nrm = np.linalg.norm(amps)
            if nrm == 0:
                raise ContractViolation("zero vector")
            amps = amps / nrm
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(
            self.num_qubits + other.num_qubits,
            np.kron(self.amplitudes, other.amplitudes),
        )

    def density_matrix(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(tuple(range(1, self.num_qubits + 1)), np.outer(a, a.conj()))

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    qubit_labels: tuple
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = tuple(int(k) for k in self.qubit_labels)
        m = _frozen(self.matrix)
        d = 2 ** len(labels)
        if len(set(labels)) != len(labels) or not labels:
            raise ContractViolation(f"bad qubit labels {labels}")
        if m.shape != (d, d):
            raise ContractViolation(f"matrix shape {m.shape} does not fit {len(labels)} qubits")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ContractViolation("matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > HERMITIAN_TOL:
            raise ContractViolation(f"trace {tr!r} != 1")
        if np.linalg.eigvalsh(m).min() < -HERMITIAN_TOL:
            raise ContractViolation("matrix is not positive semidefinite")
        object.__setattr__(self, "qubit_labels", labels)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix) -> "DensityMatrix":
        m = np.asarray(matrix, dtype=complex)
        n = int(round(np.log2(m.shape[0])))
        return cls(tuple(range(1, n + 1)), m)

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PauliString:
    """Labels in {0, 1, 2, 3} for {I, sx, sy, sz}, one per qubit."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(int(a) for a in self.labels)
        if any(a not in (0, 1, 2, 3) for a in labels):
            raise ContractViolation(f"Pauli labels out of range: {labels}")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    @property
    def support(self) -> tuple:
        return tuple(k + 1 for k, a in enumerate(self.labels) if a)


@dataclass(frozen=True)
class LocalOperator:
    qubit: int
    matrix: np.ndarray = field(repr=False)
    kind: str = "unitary"

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (2, 2):
            raise ContractViolation("local operators are 2x2")
        if self.kind not in ("unitary", "kraus"):
            raise ContractViolation(f"unknown operator kind {self.kind!r}")
        if self.kind == "unitary" and not np.allclose(m @ m.conj().T, np.eye(2), atol=HERMITIAN_TOL, rtol=0):
            raise ContractViolation("matrix is not unitary")
        if self.kind == "kraus":
            comm = m @ m.conj().T - m.conj().T @ m
            if np.max(np.abs(comm)) > HERMITIAN_TOL:
                raise ContractViolation("Kraus element is not normal")
        object.__setattr__(self, "matrix", m)


def check_kraus_set(elements: Sequence[LocalOperator]) -> int:
    """Validate a one-qubit Kraus set and return the qubit it acts on."""
    if not elements:
        raise ContractViolation("empty Kraus set")
    qubits = {e.qubit for e in elements}
    if len(qubits) != 1:
        raise ContractViolation("Kraus elements act on different qubits")
    if any(e.kind != "kraus" for e in elements):
        raise ContractViolation("Kraus set contains non-Kraus operators")
    total = sum(e.matrix.conj().T @ e.matrix for e in elements)
    if np.max(np.abs(total - np.eye(2))) > HERMITIAN_TOL:
        raise ContractViolation("Kraus set is not complete (sum L^dag L != I)")
    return qubits.pop()


def _as_labels(p) -> tuple:
    return p.labels if isinstance(p, PauliString) else PauliString(tuple(p)).labels


def _string_action(labels: Sequence[int], n: int):
    """Bit mask and phases with sigma_p |x> = phase[x] |x ^ mask>."""
    idx = np.arange(2**n)
    mask = 0
    phase = np.ones(2**n, dtype=complex)
    for q, a in enumerate(labels):
        if a == 0:
            continue
        shift = n - 1 - q
        sign = 1 - 2 * ((idx >> shift) & 1)
        if a in (1, 2):
            mask |= 1 << shift
        if a == 2:
            phase *= 1j * sign
        elif a == 3:
            phase *= sign
    return idx, mask, phase


def apply_pauli(state: PureState, p) -> np.ndarray:
    labels = _as_labels(p)
    if len(labels) != state.num_qubits:
        raise ContractViolation("Pauli string length does not match the state")
    idx, mask, phase = _string_action(labels, state.num_qubits)
    out = np.empty_like(state.amplitudes)
    out[idx ^ mask] = phase * state.amplitudes
    return out


def pauli_expectation(state: PureState | DensityMatrix, p) -> float:
    """Tr(rho sigma_p), evaluated by bit-indexed traversal of the basis."""
    labels = _as_labels(p)
    n = state.num_qubits
    if len(labels) != n:
        raise ContractViolation(f"Pauli string of length {len(labels)} on {n} qubits")
    idx, mask, phase = _string_action(labels, n)
    if isinstance(state, PureState):
        a = state.amplitudes
        val = np.vdot(a[idx ^ mask], phase * a)
    else:
        val = np.sum(state.matrix[idx, idx ^ mask] * phase)
    if abs(val.imag) >= IMAG_TOL:
        raise NumericalIntegrityError(f"imaginary residue {val.imag:.3e} on a Hermitian expectation")
    return float(val.real)


def _apply_single(amps: np.ndarray, n: int, qubit: int, m: np.ndarray) -> np.ndarray:
    psi = amps.reshape((2,) * n)
    psi = np.tensordot(m, psi, axes=([1], [qubit - 1]))
    return np.moveaxis(psi, 0, qubit - 1).reshape(-1)


def apply_local_unitary(state: PureState, op: LocalOperator) -> PureState:
    if op.kind != "unitary":
        raise ContractViolation("apply_local_unitary needs a unitary operator")
    if not 1 <= op.qubit <= state.num_qubits:
        raise ContractViolation(f"qubit {op.qubit} out of range")
    out = _apply_single(state.amplitudes, state.num_qubits, op.qubit, op.matrix)
    # renormalize away rounding; the matrix is unitary to 1e-10
    return PureState(state.num_qubits, out / np.linalg.norm(out))


def apply_local_layer(state: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Apply one 2x2 unitary per qubit, qubit 1 first."""
    if len(unitaries) != state.num_qubits:
        raise ContractViolation("need exactly one unitary per qubit")
    for k, u in enumerate(unitaries, start=1):
        state = apply_local_unitary(state, LocalOperator(k, u, "unitary"))
    return state


def apply_kraus(state: PureState, element: LocalOperator):
    """Return (probability, post-measurement state) for one Kraus element."""
    if element.kind != "kraus":
        raise ContractViolation("apply_kraus needs a Kraus element")
    if not 1 <= element.qubit <= state.num_qubits:
        raise ContractViolation(f"qubit {element.qubit} out of range")
    out = _apply_single(state.amplitudes, state.num_qubits, element.qubit, element.matrix)
    prob = float(np.vdot(out, out).real)
    if prob <= ZERO_PROB:
        raise ZeroProbabilityOutcome(f"outcome probability {prob:.3e}")
    out = out / np.sqrt(prob)
    return prob, PureState(state.num_qubits, out / np.linalg.norm(out))


def partial_trace(state: PureState | DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the qubits in ``keep`` (global labels)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ContractViolation("keep set is empty")
    if isinstance(state, PureState):
        labels = tuple(range(1, state.num_qubits + 1))
    else:
        labels = state.qubit_labels
    if any(k not in labels for k in keep):
        raise ContractViolation(f"keep set {keep} not within {labels}")
    n = len(labels)
    pos = [labels.index(k) for k in keep]
    rest = [i for i in range(n) if i not in pos]
    dk, dr = 2 ** len(pos), 2 ** len(rest)
    if isinstance(state, PureState):
        psi = state.amplitudes.reshape((2,) * n).transpose(pos + rest).reshape(dk, dr)
        rho = psi @ psi.conj().T
    else:
        r = state.matrix.reshape((2,) * (2 * n))
        r = r.transpose(pos + rest + [n + i for i in pos] + [n + i for i in rest])
        rho = np.einsum("ajbj->ab", r.reshape(dk, dr, dk, dr))
    # exact Hermitian symmetrization removes rounding asymmetry
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(tuple(keep), rho)
