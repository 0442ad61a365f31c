"""Codeword-stabilized and union-stabilizer quantum codes: structured error recovery,
measurement-operator algebra and a dense state-vector verifier."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    BudgetExceededError,
    CwsLabError,
    InconsistentCodeError,
    InvalidCodeError,
    LengthMismatchError,
    NonCommutingError,
    PauliParseError,
    SpecFileError,
    UncorrectableError,
)
from .graphs import (  # noqa: E402
    ClassicalCode,
    CwsCode,
    Graph,
    cl_map,
    corrects,
    degeneracy_classes,
    detects,
    distance,
    graph_generators,
    is_additive,
    standard_form_from_stabilizer,
)
from .measurement import and_expr, cost, detection_expr, eval_dense, xor_expr  # noqa: E402
from .pauli import PauliOperator, commutes, format_pauli, multiply, parse_pauli, weight  # noqa: E402
from .recovery import (  # noqa: E402
    additive_schedule,
    beyond_t_schedule,
    count_B,
    count_N,
    generic_recover,
    structured_recover,
    structured_schedule,
)
from .stabilizer import (  # noqa: E402
    ErrorGroup,
    StabilizerGroup,
    UstCode,
    build_aux_ust,
    conjugated_sign_matrix,
    symplectic_gram_schmidt,
)
from .statevec import StateVector, Subspace, apply_pauli, code_subspace, graph_state, measure, subspace_relation  # noqa: E402

__all__ = [
    "__version__",
    "BudgetExceededError",
    "CwsLabError",
    "InconsistentCodeError",
    "InvalidCodeError",
    "LengthMismatchError",
    "NonCommutingError",
    "PauliParseError",
    "SpecFileError",
    "UncorrectableError",
    "ClassicalCode",
    "CwsCode",
    "Graph",
    "cl_map",
    "corrects",
    "degeneracy_classes",
    "detects",
    "distance",
    "graph_generators",
    "is_additive",
    "standard_form_from_stabilizer",
    "additive_schedule",
    "beyond_t_schedule",
    "count_B",
    "count_N",
    "generic_recover",
    "structured_recover",
    "structured_schedule",
    "ErrorGroup",
    "StabilizerGroup",
    "UstCode",
    "build_aux_ust",
    "conjugated_sign_matrix",
    "symplectic_gram_schmidt",
    "and_expr",
    "cost",
    "detection_expr",
    "eval_dense",
    "xor_expr",
    "PauliOperator",
    "commutes",
    "format_pauli",
    "multiply",
    "parse_pauli",
    "weight",
    "StateVector",
    "Subspace",
    "apply_pauli",
    "code_subspace",
    "graph_state",
    "measure",
    "subspace_relation",
]
