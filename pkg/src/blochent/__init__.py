"""Correlation-tensor entanglement measure E_T = ||T^(N)|| - 1 for qubit states."""
from .state import (
    ContractViolation,
    DensityMatrix,
    LocalOperator,
    NumericalIntegrityError,
    PauliString,
    PureState,
    ZeroProbabilityOutcome,
    apply_kraus,
    apply_local_layer,
    apply_local_unitary,
    partial_trace,
    pauli_expectation,
)
from .tensor import (
    CorrTensor,
    ExtendedTensor,
    NotSymmetricError,
    ResourceLimitError,
    SymmetricCorrTensor,
    bloch_vector,
    correlation_tensor,
    correlation_tensor_symmetric,
    extended_tensor,
    k_mode_product,
    matrix_unfolding,
    outer_product,
    tensor_norm,
)
from .measure import MeasureReport, e_t, e_t_dicke, e_t_log, e_t_value, r_n
from .families import FAMILIES, build
from .roof import Decomposition, RoofConfig, RoofEstimate, roof_estimate

__version__ = "0.1.0"
