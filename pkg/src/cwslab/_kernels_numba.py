"""numba-compiled twins of the kernels in ``_kernels_numpy``."""

from __future__ import annotations

import numpy as np
from numba import njit

_IPOW = np.array([1, 1j, -1, -1j], dtype=np.complex128)


@njit(cache=True)
def _par(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit(cache=True)
def _apply_1d(amps, z, x, c):
    out = np.empty_like(amps)
    for i in range(amps.shape[0]):
        s = c if _par(i & z) == 0 else -c
        out[i] = s * amps[i ^ x]
    return out


@njit(cache=True)
def _apply_2d(amps, z, x, c):
    out = np.empty_like(amps)
    for i in range(amps.shape[0]):
        s = c if _par(i & z) == 0 else -c
        src = i ^ x
        for j in range(amps.shape[1]):
            out[i, j] = s * amps[src, j]
    return out


def parity(a):
    return (np.bitwise_count(np.asarray(a, dtype=np.int64)) & 1).astype(np.int64)


def apply_pauli(amps, z, x, phase):
    c = _IPOW[phase & 3]
    amps = np.ascontiguousarray(amps, dtype=np.complex128)
    if amps.ndim == 2:
        return _apply_2d(amps, np.int64(z), np.int64(x), c)
    return _apply_1d(amps, np.int64(z), np.int64(x), c)


@njit(cache=True)
def _graph_signs(n, upper):
    dim = 1 << n
    out = np.empty(dim, dtype=np.int8)
    for idx in range(dim):
        p = 0
        for i in range(n):
            if (idx >> i) & 1:
                p ^= _par(idx & upper[i])
        out[idx] = 1 - 2 * p
    return out


def graph_state_signs(n, upper):
    return _graph_signs(n, np.asarray(upper, dtype=np.int64))


@njit(cache=True)
def _cl_images(zs, xs, rows):
    out = zs.copy()
    for k in range(zs.shape[0]):
        u = xs[k]
        l = 0
        while u:
            if u & 1:
                out[k] ^= rows[l]
            u >>= 1
            l += 1
    return out


def cl_images(zs, xs, rows):
    return _cl_images(
        np.ascontiguousarray(zs, dtype=np.int64),
        np.ascontiguousarray(xs, dtype=np.int64),
        np.asarray(rows, dtype=np.int64),
    )


@njit(cache=True)
def _anticommute(zs, xs, z, x):
    out = np.empty(zs.shape[0], dtype=np.int8)
    for k in range(zs.shape[0]):
        out[k] = _par((zs[k] & x) ^ (xs[k] & z))
    return out


def anticommute_parities(zs, xs, z, x):
    return _anticommute(
        np.ascontiguousarray(zs, dtype=np.int64),
        np.ascontiguousarray(xs, dtype=np.int64),
        np.int64(z),
        np.int64(x),
    )
