"""Runtime switches and numerical tolerances shared across the package."""

from __future__ import annotations

import os

#: Absolute tolerance for amplitude comparisons after normalization.
AMP_TOL = 1e-10
#: Tolerance for operator identities (Hermiticity, M^2 = I).
OP_TOL = 1e-12
#: Gram-matrix defect above which a code basis is rejected.
GRAM_TOL = 1e-8
#: Default cap on the number of Pauli operators an enumeration may visit.
DEFAULT_ENUM_BUDGET = 10**6

_DEFAULT_DENSE_QUBITS = 12


def _env_flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() not in ("0", "false", "no", "off", "")


def dense_budget() -> int:
    """Largest qubit count the dense simulator accepts (``CWSLAB_DENSE_BUDGET``)."""
    raw = os.environ.get("CWSLAB_DENSE_BUDGET")
    if raw is None:
        return _DEFAULT_DENSE_QUBITS
    return int(raw)


#: Whether hot kernels should be numba-compiled (``CWSLAB_NUMBA=0`` disables).
USE_NUMBA = _env_flag("CWSLAB_NUMBA", True)
