"""The entanglement measure E_T = ||T^(N)|| - 1, its log variant, the GHZ
normalization R_N and closed-form values for the standard state families."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .state import ContractViolation, DensityMatrix, PureState
from .tensor import (
    GENERIC_CAP,
    SymmetricCorrTensor,
    correlation_tensor,
    correlation_tensor_symmetric,
    symmetric_tensor_from_dicke,
    tensor_norm,
)


@dataclass(frozen=True)
class MeasureReport:
    norm: float
    e_t: float
    e_t_log: float
    normalized: Optional[float]
    n_qubits: int
    elapsed_ms: float

    def to_dict(self) -> dict:
        return asdict(self)


def report_from_norm(norm: float, n: int, normalize: bool = False, elapsed_ms: float = 0.0) -> MeasureReport:
    e = norm - 1.0
    log_e = math.log2(norm) if norm > 0 else -math.inf
    normalized = e / r_n(n) if normalize and n >= 2 else None
    return MeasureReport(norm, e, log_e, normalized, n, elapsed_ms)


def full_norm(state, method: str = "generic", max_qubits: int = GENERIC_CAP) -> float:
    """||T^(N)|| of a pure state or density matrix (all of its qubits)."""
    if method == "generic":
        return tensor_norm(correlation_tensor(state, max_qubits=max_qubits))
    if method == "symmetric":
        if not isinstance(state, PureState):
            raise ContractViolation("symmetric path needs a pure state")
        return tensor_norm(correlation_tensor_symmetric(state))
    raise ContractViolation(f"unknown method {method!r}")


def e_t(
    state: PureState | DensityMatrix,
    normalize: bool = False,
    method: str = "generic",
    max_qubits: int = GENERIC_CAP,
) -> MeasureReport:
    """E_T of a pure state.

    A density matrix is accepted too and gives ||T_rho|| - 1 of that mixed
    state, which is *not* its convex-roof value (see :mod:`blochent.roof`).
    """
    t0 = time.perf_counter()
    norm = full_norm(state, method=method, max_qubits=max_qubits)
    ms = 1000 * (time.perf_counter() - t0)
    return report_from_norm(norm, state.num_qubits, normalize=normalize, elapsed_ms=ms)


def e_t_value(state, **kw) -> float:
    return e_t(state, **kw).e_t


def e_t_log(state, **kw) -> float:
    return e_t(state, **kw).e_t_log


def e_t_dicke(coeffs: Sequence[complex], normalize: bool = False) -> MeasureReport:
    """E_T of a symmetric state given in the Dicke basis; works for large N."""
    t0 = time.perf_counter()
    tensor: SymmetricCorrTensor = symmetric_tensor_from_dicke(coeffs)
    norm = tensor_norm(tensor)
    ms = 1000 * (time.perf_counter() - t0)
    return report_from_norm(norm, tensor.order, normalize=normalize, elapsed_ms=ms)


# ---------------------------------------------------------------------------
# closed forms


def _even_binomial_sum(n: int) -> int:
    return sum(math.comb(n, 2 * k) for k in range(1, n // 2 + 1))


def r_n(n: int) -> float:
    """E_T of the maximally entangled N-qubit GHZ state."""
    if n < 2:
        raise ContractViolation("R_N needs N >= 2")
    return math.sqrt(1 + 0.25 * (1 + (-1) ** n) ** 2 + _even_binomial_sum(n)) - 1


def ghz_norm_squared(p: float, n: int) -> float:
    if not 0 <= p <= 1:
        raise ContractViolation(f"p = {p} outside [0, 1]")
    if n < 2:
        raise ContractViolation("GHZ states need N >= 2")
    c2 = 4 * p * (1 - p)
    return c2 + (p + (-1) ** n * (1 - p)) ** 2 + c2 * _even_binomial_sum(n)


def ghz_closed_form(p: float, n: int) -> float:
    return math.sqrt(ghz_norm_squared(p, n)) - 1


def w_closed_form(n: int) -> float:
    if n < 3:
        raise ContractViolation("W states need N >= 3")
    return math.sqrt(1 + 4 * (n - 1) / n) - 1


def wghz_closed_form(s: float) -> float:
    """Three-qubit sqrt(s)|GHZ> + sqrt(1-s) e^{i phi}|W>, any phi."""
    if not 0 <= s <= 1:
        raise ContractViolation(f"s = {s} outside [0, 1]")
    return math.sqrt(4 * s * s + 6 * s * (1 - s) + 11 / 3 * (1 - s) ** 2) - 1


def _two_qubit_amplitudes(a):
    a = np.asarray(a, dtype=complex)
    if a.shape != (4,):
        raise ContractViolation("need four amplitudes")
    if abs(np.vdot(a, a).real - 1) > 1e-12:
        raise ContractViolation("amplitudes are not normalized")
    return a


def two_qubit_closed_form(a1, a2, a3, a4) -> float:
    """sqrt(1 + 8(|a2 a3| - |a1 a4|)^2) - 1 for a1|00> + a2|01> + a3|10> + a4|11>.

    Exact only when a1 a4 and a2 a3 share a complex phase; in general it is
    a lower bound on E_T. :func:`two_qubit_concurrence_form` is exact.
    """
    a = _two_qubit_amplitudes((a1, a2, a3, a4))
    d = abs(a[1] * a[2]) - abs(a[0] * a[3])
    return math.sqrt(1 + 8 * d * d) - 1


def two_qubit_concurrence_form(a1, a2, a3, a4) -> float:
    """sqrt(1 + 2 C^2) - 1 with the concurrence C = 2|a1 a4 - a2 a3|."""
    a = _two_qubit_amplitudes((a1, a2, a3, a4))
    c = 2 * abs(a[0] * a[3] - a[1] * a[2])
    return math.sqrt(1 + 2 * c * c) - 1


def concurrence_relation(p: float) -> float:
    if not 0 <= p <= 1:
        raise ContractViolation(f"p = {p} outside [0, 1]")
    c = 2 * math.sqrt(p * (1 - p))
    return math.sqrt(1 + 2 * c * c) - 1


def heisenberg_norm_formula(n: int, s: int) -> float:
    """Closed-form ||T^(N)||^2 for the Dicke state psi_N(s), N even.

    Sums over placements of x sigma_x and y sigma_y (x, y even, x + y >= 2);
    the all-sigma_z entry contributes the leading 1.

    Advisory only. The bracketed kernel equals the exact entry, the t^h
    coefficient of (1 + t)^x (1 - t)^y, only while min(x, y) < 4, so the
    formula is exact for N <= 6 and drifts from N = 8 on (at N = 100 it
    even exceeds the bound ||T||^2 <= 2^N).
    """
    if n % 2:
        raise ContractViolation("the closed form is stated for even N")
    if not 0 <= s <= n:
        raise ContractViolation(f"s = {s} outside 0..{n}")
    total = 0
    for x in range(0, n + 1, 2):
        for y in range(0, n - x + 1, 2):
            if x + y < 2 or x + y > 2 * s:
                continue
            h = (x + y) // 2
            k = 2 * math.comb(x, x // 2) * math.comb(y, y // 2) - math.comb(x + y, h)
            b = s - h
            if not 0 <= b <= n - x - y:
                continue
            total += k * k * math.comb(n - x - y, b) ** 2 * math.comb(n, x) * math.comb(n - x, y)
    return 1 + total / math.comb(n, s) ** 2


def schmidt3_lower_bound(lambdas: Sequence[float]) -> float:
    """Right-hand side of the three-qubit Schmidt-form bound on ||T^(3)||^2."""
    l0, l1, l2, l3, l4 = lambdas
    return (
        1
        + 12 * l0**2 * l4**2
        + 8 * l0**2 * l2**2
        + 8 * l0**2 * l3**2
        + 8 * (l1 * l4 - l2 * l3) ** 2
    )


@dataclass(frozen=True)
class FormulaCheck:
    """A closed-form value next to its brute-force counterpart.

    ``mismatch`` flags disagreement beyond ``tol`` instead of raising, for
    formulas that are only advisory.
    """

    name: str
    formula: float
    brute_force: float
    tol: float

    @property
    def mismatch(self) -> bool:
        return not abs(self.formula - self.brute_force) <= self.tol

    def to_dict(self) -> dict:
        return {**asdict(self), "mismatch": self.mismatch}


def check_heisenberg_formula(n: int, s: int, tol: float = 1e-9) -> FormulaCheck:
    from .families import dicke_coefficients, dicke_state

    if n <= GENERIC_CAP:
        brute = tensor_norm(correlation_tensor(dicke_state(n, s))) ** 2
    else:
        brute = tensor_norm(symmetric_tensor_from_dicke(dicke_coefficients(n, s))) ** 2
    return FormulaCheck(f"heisenberg(N={n}, s={s})", heisenberg_norm_formula(n, s), brute, tol * max(1.0, brute))
