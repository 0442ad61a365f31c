"""Backend dispatch for the hot bit-mask and amplitude kernels.

The numba path is used when numba imports and ``CWSLAB_NUMBA`` is not set to
``0``; otherwise the pure-numpy implementations run. Both produce identical
results (checked in the test suite).
"""

from __future__ import annotations

from . import _kernels_numpy
from ._config import USE_NUMBA

_impl = _kernels_numpy
BACKEND = "numpy"
if USE_NUMBA:
    try:
        from . import _kernels_numba as _impl  # noqa: F811

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba missing
        pass

apply_pauli = _impl.apply_pauli
graph_state_signs = _impl.graph_state_signs
cl_images = _impl.cl_images
anticommute_parities = _impl.anticommute_parities
parity = _kernels_numpy.parity

__all__ = [
    "BACKEND",
    "apply_pauli",
    "graph_state_signs",
    "cl_images",
    "anticommute_parities",
    "parity",
]
