"""Pure-numpy kernels. Reference path and fallback when numba is disabled."""

from __future__ import annotations

import numpy as np

_IPOW = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def parity(a):
    return (np.bitwise_count(np.asarray(a, dtype=np.int64)) & 1).astype(np.int64)


def apply_pauli(amps, z, x, phase):
    """Return ``i^phase Z^z X^x`` applied to ``amps`` (1-D state or 2-D column stack)."""
    idx = np.arange(amps.shape[0], dtype=np.int64)
    signs = 1.0 - 2.0 * parity(idx & z)
    coeff = _IPOW[phase & 3] * signs
    moved = amps[idx ^ x]
    if amps.ndim == 2:
        return coeff[:, None] * moved
    return coeff * moved


def graph_state_signs(n, upper):
    # upper[i] = neighbours j > i of vertex i, so each edge is counted once
    idx = np.arange(1 << n, dtype=np.int64)
    par = np.zeros(idx.shape, dtype=np.int64)
    for i in range(n):
        par ^= ((idx >> i) & 1) & parity(idx & upper[i])
    return (1 - 2 * par).astype(np.int8)


def cl_images(zs, xs, rows):
    zs = np.asarray(zs, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    out = zs.copy()
    for l, r in enumerate(rows):
        out ^= np.where((xs >> l) & 1, np.int64(r), np.int64(0))
    return out


def anticommute_parities(zs, xs, z, x):
    zs = np.asarray(zs, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    return (parity(zs & x) ^ parity(xs & z)).astype(np.int8)
