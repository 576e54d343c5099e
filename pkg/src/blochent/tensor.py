"""Correlation tensors of qubit states and the multilinear algebra around them.

A correlation tensor of order M stores t[a1..aM] = Tr(rho s_a1 x ... x s_aM) for
a_k in {1, 2, 3}; array position i holds Pauli label i + 1.  The extended
tensor runs over {0, 1, 2, 3} (0 = identity), so position i is label i.
Entries are stored in C order: the last mode varies fastest.

Entries are computed by contracting the state against the Pauli basis one
qubit at a time rather than by evaluating 3^N separate expectation values.
For pure states the qubits are split into a prefix and a suffix so that no
2^N x 2^N matrix is ever formed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .state import (
    IMAG_TOL,
    PAULI,
    ContractViolation,
    DensityMatrix,
    NumericalIntegrityError,
    PureState,
    _string_action,
    partial_trace,
)

GENERIC_CAP = 12
EXTENDED_CAP = 10
BATCH_CAP = 8
SYMMETRY_TOL = 1e-10


class ResourceLimitError(RuntimeError):
    """The requested tensor is larger than the configured cap."""


class NotSymmetricError(ValueError):
    """The state is not invariant under qubit permutations."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CorrTensor:
    qubit_labels: tuple
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = _freeze(self.entries)
        labels = tuple(self.qubit_labels)
        if e.ndim != len(labels) or any(d != 3 for d in e.shape):
            raise ContractViolation(f"entries of shape {e.shape} for labels {labels}")
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "qubit_labels", labels)

    @property
    def order(self) -> int:
        return self.entries.ndim

    def value(self, alphas: Sequence[int]) -> float:
        """Entry for Pauli labels ``alphas`` in {1, 2, 3}."""
        return float(self.entries[tuple(a - 1 for a in alphas)])


@dataclass(frozen=True)
class ExtendedTensor:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = _freeze(self.entries)
        if any(d != 4 for d in e.shape):
            raise ContractViolation(f"extended tensor of shape {e.shape}")
        object.__setattr__(self, "entries", e)

    @property
    def order(self) -> int:
        return self.entries.ndim

    def correlation_block(self) -> np.ndarray:
        """The all-nonidentity block, i.e. the order-N correlation tensor."""
        return self.entries[(slice(1, None),) * self.order]


def _check_real(vals: np.ndarray) -> np.ndarray:
    if vals.size and np.max(np.abs(vals.imag)) >= IMAG_TOL:
        raise NumericalIntegrityError(
            f"imaginary residue {np.max(np.abs(vals.imag)):.3e} in a Pauli expectation"
        )
    return np.ascontiguousarray(vals.real)


def _pauli_stack(alphabet: Sequence[int]) -> np.ndarray:
    # S[a, c, r] = sigma_a[c, r]  so that  Tr(op sigma_a) = sum_rc op[r, c] S[a, c, r]
    return PAULI[list(alphabet)]


def _pauli_transform(ops: np.ndarray, n: int, alphabet: Sequence[int]) -> np.ndarray:
    """Tr(op sigma_a1 x ... x sigma_an) for a batch of 2^n x 2^n operators.

    Returns a complex array of shape (B,) + (len(alphabet),) * n.
    """
    b = ops.shape[0]
    s = _pauli_stack(alphabet)
    t = ops.reshape((b,) + (2,) * (2 * n))
    for q in range(n):
        # row axis of qubit q sits at 1, its column axis at 1 + (n - q)
        t = np.tensordot(t, s, axes=([1, 1 + n - q], [2, 1]))
    return t


@lru_cache(maxsize=16)
def _dense_strings(p: int, alphabet: tuple) -> np.ndarray:
    out = np.ones((1, 1, 1), dtype=complex)
    s = _pauli_stack(alphabet)
    for _ in range(p):
        out = np.einsum("aij,bkl->abikjl", out, s)
        a, b, i, k, j, l = out.shape
        out = out.reshape(a * b, i * k, j * l)
    out.setflags(write=False)
    return out


def _pure_coefficients(amps: np.ndarray, n: int, alphabet: tuple) -> np.ndarray:
    k = len(alphabet)
    p = n // 2 if n > 6 else 0
    q = n - p
    psi = amps.reshape(2**p, 2**q)
    strings = _dense_strings(p, alphabet)
    # ops[A][l, k] = (Psi^H sigma_A Psi)[k, l], the suffix operator seen by string A
    g = psi.conj().T[None, :, :] @ (strings @ psi[None, :, :])
    vals = _pauli_transform(g.transpose(0, 2, 1), q, alphabet)
    return vals.reshape((k,) * n)


def _operator_coefficients(rho: np.ndarray, n: int, alphabet: tuple) -> np.ndarray:
    vals = _pauli_transform(rho[None, :, :], n, alphabet)
    return vals.reshape((len(alphabet),) * n)


def _labels_of(state) -> tuple:
    if isinstance(state, PureState):
        return tuple(range(1, state.num_qubits + 1))
    return state.qubit_labels


def bloch_vector(state: PureState | DensityMatrix, k: int) -> np.ndarray:
    labels = _labels_of(state)
    if k not in labels:
        raise ContractViolation(f"qubit {k} out of range {labels}")
    rho = partial_trace(state, [k]).matrix
    return _check_real(_operator_coefficients(rho, 1, (1, 2, 3)))


def correlation_tensor(
    state: PureState | DensityMatrix,
    subset: Sequence[int] | None = None,
    max_qubits: int = GENERIC_CAP,
) -> CorrTensor:
    labels = _labels_of(state)
    subset = labels if subset is None else tuple(sorted(set(int(k) for k in subset)))
    if not subset:
        raise ContractViolation("subset is empty")
    if any(k not in labels for k in subset):
        raise ContractViolation(f"subset {subset} not within {labels}")
    m = len(subset)
    if m > max_qubits:
        raise ResourceLimitError(f"{m}-qubit correlation tensor exceeds the cap of {max_qubits}")
    if isinstance(state, PureState) and subset == labels:
        vals = _pure_coefficients(state.amplitudes, m, (1, 2, 3))
    else:
        rho = state.matrix if subset == labels else partial_trace(state, subset).matrix
        vals = _operator_coefficients(rho, m, (1, 2, 3))
    return CorrTensor(subset, _check_real(vals))


def extended_tensor(state: PureState | DensityMatrix, max_qubits: int = EXTENDED_CAP) -> ExtendedTensor:
    n = state.num_qubits
    if n > max_qubits:
        raise ResourceLimitError(f"{n}-qubit extended tensor exceeds the cap of {max_qubits}")
    if isinstance(state, PureState):
        vals = _pure_coefficients(state.amplitudes, n, (0, 1, 2, 3))
    else:
        vals = _operator_coefficients(state.matrix, n, (0, 1, 2, 3))
    vals = _check_real(vals).copy()
    origin = (0,) * n
    if abs(vals[origin] - 1.0) > 1e-10:
        raise NumericalIntegrityError(f"trace {vals[origin]!r} != 1")
    vals[origin] = 1.0
    return ExtendedTensor(vals)


def _entries(t) -> np.ndarray:
    if isinstance(t, (CorrTensor, ExtendedTensor)):
        return t.entries
    return np.asarray(t, dtype=float)


def tensor_norm(t) -> float:
    """Euclidean (Hilbert-Schmidt) norm of a tensor."""
    if isinstance(t, SymmetricCorrTensor):
        return math.sqrt(t.norm_squared())
    e = np.ascontiguousarray(_entries(t)).ravel()
    # np.sum over a contiguous 1-D array uses pairwise summation
    return float(np.sqrt(np.sum(e * e)))


def _check_mode(order: int, k: int):
    if not 1 <= k <= order:
        raise ContractViolation(f"mode {k} out of range 1..{order}")


def matrix_unfolding(t, k: int) -> np.ndarray:
    """Mode-k unfolding: rows follow mode k, columns run over the other
    modes in increasing mode order with the last one varying fastest."""
    e = _entries(t)
    _check_mode(e.ndim, k)
    return np.moveaxis(e, k - 1, 0).reshape(e.shape[k - 1], -1)


def refold(mat: np.ndarray, k: int, shape: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`matrix_unfolding` for a tensor of the given shape."""
    shape = tuple(shape)
    _check_mode(len(shape), k)
    rest = shape[: k - 1] + shape[k:]
    return np.moveaxis(np.asarray(mat).reshape((shape[k - 1],) + rest), 0, k - 1)


def k_mode_product(t, m: np.ndarray, k: int):
    """T x_k M: every mode-k fibre of T is multiplied by M."""
    e = _entries(t)
    _check_mode(e.ndim, k)
    m = np.asarray(m, dtype=float)
    if m.shape != (e.shape[k - 1], e.shape[k - 1]):
        raise ContractViolation(f"matrix shape {m.shape} does not fit mode {k}")
    out = np.moveaxis(np.tensordot(m, e, axes=([1], [k - 1])), 0, k - 1)
    if isinstance(t, CorrTensor):
        return CorrTensor(t.qubit_labels, out)
    if isinstance(t, ExtendedTensor):
        return ExtendedTensor(out)
    return out


def outer_product(a, b) -> CorrTensor:
    """a o b. Qubit labels of ``b`` are shifted past those of ``a`` when they clash."""
    ea, eb = _entries(a), _entries(b)
    la = a.qubit_labels if isinstance(a, CorrTensor) else tuple(range(1, ea.ndim + 1))
    lb = b.qubit_labels if isinstance(b, CorrTensor) else tuple(range(1, eb.ndim + 1))
    if set(la) & set(lb):
        lb = tuple(x + max(la) for x in lb)
    return CorrTensor(la + lb, np.multiply.outer(ea, eb))


# ---------------------------------------------------------------------------
# batch path for many small states (convex-roof objective, random search)


@lru_cache(maxsize=16)
def _string_tables(n: int):
    strings = list(itertools.product((1, 2, 3), repeat=n))
    gather = np.empty((len(strings), 2**n), dtype=np.intp)
    phases = np.empty((len(strings), 2**n), dtype=complex)
    for i, s in enumerate(strings):
        idx, mask, phase = _string_action(s, n)
        gather[i] = idx ^ mask
        phases[i] = phase
    return gather, phases


def batch_correlation_norms(vectors: np.ndarray, chunk: int = 1024) -> np.ndarray:
    """||T^(N)|| for each row of ``vectors``; rows need not be normalized
    (the result then scales with the squared row norm)."""
    v = np.atleast_2d(np.asarray(vectors, dtype=complex))
    n = int(round(np.log2(v.shape[1])))
    if n > BATCH_CAP:
        raise ResourceLimitError(f"batch path is limited to {BATCH_CAP} qubits")
    gather, phases = _string_tables(n)
    out = np.empty(v.shape[0])
    for start in range(0, v.shape[0], chunk):
        blk = v[start : start + chunk]
        t = np.einsum("bax,ax,bx->ba", blk.conj()[:, gather], phases, blk).real
        out[start : start + chunk] = np.sqrt(np.sum(t * t, axis=1))
    return out


# ---------------------------------------------------------------------------
# permutation-symmetric states


def _multinomial(n1: int, n2: int, n3: int) -> int:
    return math.comb(n1 + n2 + n3, n1) * math.comb(n2 + n3, n2)


@dataclass(frozen=True)
class SymmetricCorrTensor:
    """Supersymmetric order-N correlation tensor stored by label counts.

    ``values[(n1, n2, n3)]`` is the entry for any index tuple holding n1
    ones, n2 twos and n3 threes.
    """

    order: int
    values: dict = field(repr=False)

    @property
    def n_representatives(self) -> int:
        return len(self.values)

    def multiplicity(self, key) -> int:
        return _multinomial(*key)

    def norm_squared(self) -> float:
        return math.fsum(float(self.multiplicity(k)) * v * v for k, v in self.values.items())

    def value(self, alphas: Sequence[int]) -> float:
        return self.values[(alphas.count(1), alphas.count(2), alphas.count(3))]

    def to_dense(self, max_qubits: int = GENERIC_CAP) -> CorrTensor:
        n = self.order
        if n > max_qubits:
            raise ResourceLimitError(f"dense {n}-qubit tensor exceeds the cap of {max_qubits}")
        table = np.zeros((n + 1, n + 1))
        for (n1, n2, _), v in self.values.items():
            table[n1, n2] = v
        idx = np.arange(3**n)
        c1 = np.zeros_like(idx)
        c2 = np.zeros_like(idx)
        for _ in range(n):
            idx, digit = np.divmod(idx, 3)
            c1 += digit == 0
            c2 += digit == 1
        return CorrTensor(tuple(range(1, n + 1)), table[c1, c2].reshape((3,) * n))


@lru_cache(maxsize=None)
def _flip_sum(n1: int, n2: int, a: int) -> int:
    """Coefficient of x^a in (1 + x)^n1 (1 - x)^n2."""
    return sum(
        math.comb(n1, a - c) * math.comb(n2, c) * (-1) ** c
        for c in range(max(0, a - n1), min(a, n2) + 1)
    )


def symmetric_tensor_from_dicke(coeffs: Sequence[complex]) -> SymmetricCorrTensor:
    """Correlation tensor of sum_s c_s |D_s>, |D_s> the weight-s Dicke states.

    One entry per multiset of labels is evaluated, (N+1)(N+2)/2 in total.
    Integer parts are exact, so this stays accurate for N in the hundreds.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = c.size - 1
    if n < 1:
        raise ContractViolation("need at least one qubit")
    if abs(np.vdot(c, c).real - 1.0) > 1e-12:
        raise ContractViolation("Dicke coefficients are not normalized")
    support = [s for s in range(n + 1) if c[s] != 0]
    scale = [math.sqrt(float(math.comb(n, s))) for s in range(n + 1)]
    values = {}
    for n1 in range(n + 1):
        for n2 in range(n + 1 - n1):
            n3 = n - n1 - n2
            flips = n1 + n2
            total = 0j
            for s in support:
                for s2 in support:
                    twice_a = s - s2 + flips
                    if twice_a % 2:
                        continue
                    a = twice_a // 2
                    b = s - a
                    if not (0 <= a <= flips and 0 <= b <= n3):
                        continue
                    k = _flip_sum(n1, n2, a)
                    if k == 0:
                        continue
                    amp = (-1) ** b * math.comb(n3, b) * k
                    total += c[s2].conjugate() * c[s] * (float(amp) / (scale[s] * scale[s2]))
            total *= 1j**n2
            if abs(total.imag) >= IMAG_TOL:
                raise NumericalIntegrityError(f"imaginary residue {total.imag:.3e}")
            values[(n1, n2, n3)] = total.real
    return SymmetricCorrTensor(n, values)


def _hamming_weights(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    w = np.zeros_like(idx)
    for q in range(n):
        w += (idx >> q) & 1
    return w


def is_permutation_symmetric(state: PureState, seed: int = 0, tol: float = SYMMETRY_TOL) -> bool:
    """Check invariance under 2N qubit transpositions: every adjacent swap
    (these generate all permutations) plus randomly drawn ones."""
    n = state.num_qubits
    if n == 1:
        return True
    psi = state.amplitudes.reshape((2,) * n)
    pairs = [(i, i + 1) for i in range(n - 1)]
    rng = np.random.default_rng(seed)
    while len(pairs) < 2 * n:
        i, j = sorted(rng.choice(n, size=2, replace=False))
        pairs.append((int(i), int(j)))
    return all(np.max(np.abs(np.swapaxes(psi, i, j) - psi)) <= tol for i, j in pairs)


def dicke_projection(state: PureState) -> np.ndarray:
    """Coefficients c_s with |psi> = sum_s c_s |D_s> for a symmetric state."""
    n = state.num_qubits
    w = _hamming_weights(n)
    a = state.amplitudes
    sums = np.bincount(w, weights=a.real, minlength=n + 1) + 1j * np.bincount(
        w, weights=a.imag, minlength=n + 1
    )
    return sums / np.sqrt([float(math.comb(n, s)) for s in range(n + 1)])


def correlation_tensor_symmetric(state: PureState, seed: int = 0) -> SymmetricCorrTensor:
    if not is_permutation_symmetric(state, seed=seed):
        raise NotSymmetricError("state is not permutation symmetric")
    c = dicke_projection(state)
    return symmetric_tensor_from_dicke(c / np.linalg.norm(c))
