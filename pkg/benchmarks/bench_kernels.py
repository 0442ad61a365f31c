"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--qubits 18]

Numba timings exclude the first (compiling) call. Every kernel's outputs are
compared between backends before timing.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from cwslab import _kernels_numpy as knp

try:
    from cwslab import _kernels_numba as knb
except ImportError:  # pragma: no cover
    knb = None


def _cases(qubits: int, rng: np.random.Generator):
    dim = 1 << qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    cols = rng.normal(size=(1 << 12, 8)) + 1j * rng.normal(size=(1 << 12, 8))
    z, x = int(rng.integers(dim)), int(rng.integers(dim))
    n_img = 20
    rows = rng.integers(0, 1 << n_img, size=n_img).astype(np.int64)
    zs = rng.integers(0, 1 << n_img, size=1_000_000).astype(np.int64)
    xs = rng.integers(0, 1 << n_img, size=1_000_000).astype(np.int64)
    g = 16
    ring = np.array([(1 << ((i + 1) % g)) if i + 1 < g else 0 for i in range(g)], dtype=np.int64)
    ring[0] |= 1 << (g - 1)
    return {
        f"apply_pauli (1 state, n={qubits})": lambda k: k.apply_pauli(amps, z, x, 1),
        "apply_pauli (8 columns, n=12)": lambda k: k.apply_pauli(cols, z & 0xFFF, x & 0xFFF, 3),
        "cl_images (1e6 errors, n=20)": lambda k: k.cl_images(zs, xs, rows),
        "anticommute_parities (1e6)": lambda k: k.anticommute_parities(zs, xs, 0x5A5A5, 0x3C3C3),
        f"graph_state_signs (ring, n={g})": lambda k: k.graph_state_signs(g, ring),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--qubits", type=int, default=18)
    args = ap.parse_args(argv)
    if knb is None:
        print("numba is not installed; only the numpy backend is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, fn in _cases(args.qubits, rng).items():
        ref, got = fn(knp), fn(knb)  # second call also compiles numba
        if not np.array_equal(ref, got):
            raise SystemExit(f"backends disagree on {name}")
        t_np = min(timeit.repeat(lambda: fn(knp), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: fn(knb), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:38s} {t_np:11.2f} {t_nb:11.2f} {t_np / t_nb:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
