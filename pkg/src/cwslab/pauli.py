"""Phase-tracked binary-symplectic Pauli operators and GF(2) linear algebra.

An n-qubit Pauli is stored as ``i^phase * Z^z * X^x`` where ``z`` and ``x`` are
n-bit integer masks. Qubit ``q`` (1-based, as in ``Z_1 ... Z_n``) lives in bit
``q - 1``. The single-qubit ``Y`` is fixed as ``Y = iXZ``, which in the stored
ordering reads ``Y = i^3 Z X``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .exceptions import LengthMismatchError, PauliParseError

_PREFIX = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_FORMAT_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_SPARSE = re.compile(r"([XYZ])(\d+)")
_STRING = re.compile(r"^([+-]?i?)([IXYZ]+)$")


def popcount(v: int) -> int:
    return int(v).bit_count()


def mask_from_bits(bits: str) -> int:
    """``"01101"`` -> mask with qubit 1 as the leftmost character."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


def bits_from_mask(mask: int, n: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


def qubits_of(mask: int) -> tuple[int, ...]:
    """1-based qubit indices set in ``mask``."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class PauliOperator:
    n: int
    z: int = 0
    x: int = 0
    phase: int = 0

    def __post_init__(self):
        full = (1 << self.n) - 1
        if self.n < 0 or self.z & ~full or self.x & ~full or self.z < 0 or self.x < 0:
            raise ValueError(f"masks do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> PauliOperator:
        """Single-qubit ``kind`` in {"X","Y","Z","I"} on 1-based ``qubit``."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} out of range 1..{n}")
        return cls.from_string("".join(kind if q == qubit else "I" for q in range(1, n + 1)))

    @classmethod
    def z_type(cls, n: int, mask: int) -> PauliOperator:
        return cls(n, z=mask)

    @classmethod
    def x_type(cls, n: int, mask: int) -> PauliOperator:
        return cls(n, x=mask)

    @classmethod
    def from_string(cls, s: str, n: int | None = None) -> PauliOperator:
        """Parse ``"XZZXI"``, ``"-iY"`` or the sparse form ``"X2Z5"`` (needs ``n``)."""
        s = s.strip()
        m = _STRING.match(s)
        if m is None:
            if n is not None:
                return cls._from_sparse(s, n)
            raise PauliParseError(f"invalid Pauli string {s!r}")
        prefix, body = m.groups()
        if n is not None and len(body) != n:
            raise PauliParseError(f"{s!r} has {len(body)} qubits, expected {n}")
        z = x = 0
        phase = _PREFIX[prefix]
        for i, ch in enumerate(body):
            if ch in "ZY":
                z |= 1 << i
            if ch in "XY":
                x |= 1 << i
            if ch == "Y":
                phase += 3
        return cls(len(body), z, x, phase)

    @classmethod
    def _from_sparse(cls, s: str, n: int) -> PauliOperator:
        sign = 0
        if s.startswith("-"):
            sign, s = 2, s[1:]
        elif s.startswith("+"):
            s = s[1:]
        if not s or _SPARSE.sub("", s):
            raise PauliParseError(f"invalid Pauli string {s!r}")
        out = cls(n, phase=sign)
        for kind, q in _SPARSE.findall(s):
            out = out * cls.single(n, int(q), kind)
        return out

    # group law --------------------------------------------------------------
    def _check(self, other: PauliOperator):
        if self.n != other.n:
            raise LengthMismatchError(f"{self.n}-qubit vs {other.n}-qubit operator")

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        self._check(other)
        # X^u1 Z^v2 = (-1)^{u1.v2} Z^v2 X^u1
        phase = self.phase + other.phase + 2 * popcount(self.x & other.z)
        return PauliOperator(self.n, self.z ^ other.z, self.x ^ other.x, phase)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n, self.z, self.x, self.phase + 2)

    def dagger(self) -> PauliOperator:
        return PauliOperator(self.n, self.z, self.x, -self.phase + 2 * popcount(self.z & self.x))

    def conjugate(self, other: PauliOperator) -> PauliOperator:
        """Return ``self * other * self^dagger``."""
        return self * other * self.dagger()

    def commutes(self, other: PauliOperator) -> bool:
        self._check(other)
        return (popcount(self.z & other.x) + popcount(self.x & other.z)) % 2 == 0

    # predicates -------------------------------------------------------------
    @property
    def weight(self) -> int:
        return popcount(self.z | self.x)

    @property
    def support(self) -> tuple[int, ...]:
        return qubits_of(self.z | self.x)

    @property
    def is_identity(self) -> bool:
        """True when the operator is proportional to the identity."""
        return self.z == 0 and self.x == 0

    @property
    def is_hermitian(self) -> bool:
        return (self.phase - popcount(self.z & self.x)) % 2 == 0

    @property
    def sign(self) -> int:
        """+1/-1 for Hermitian operators relative to their canonical string."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if self.display_phase == 0 else -1

    @property
    def display_phase(self) -> int:
        """Exponent of ``i`` in front of the ``I/X/Y/Z`` string."""
        return (self.phase + popcount(self.z & self.x)) % 4

    def equiv(self, other: PauliOperator) -> bool:
        """Projective equality: same operator up to a power of ``i``."""
        self._check(other)
        return self.z == other.z and self.x == other.x

    def unsigned(self) -> PauliOperator:
        """The same operator with display phase +1."""
        return PauliOperator(self.n, self.z, self.x, -popcount(self.z & self.x))

    def symplectic(self) -> np.ndarray:
        """Length-2n GF(2) vector ``[z | x]``."""
        out = np.zeros(2 * self.n, dtype=np.uint8)
        for i in range(self.n):
            out[i] = (self.z >> i) & 1
            out[self.n + i] = (self.x >> i) & 1
        return out

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n
        idx = np.arange(dim, dtype=np.int64)
        tgt = idx ^ self.x
        signs = 1 - 2 * (np.bitwise_count(tgt & self.z) & 1).astype(np.int64)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[tgt, idx] = (1j**self.phase) * signs
        return mat

    def body(self) -> str:
        chars = []
        for i in range(self.n):
            zb, xb = (self.z >> i) & 1, (self.x >> i) & 1
            chars.append("IXZY"[zb * 2 + xb])
        return "".join(chars)

    def __str__(self) -> str:
        return _FORMAT_PREFIX[self.display_phase] + self.body()

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"


def parse_pauli(s: str, n: int | None = None) -> PauliOperator:
    return PauliOperator.from_string(s, n)


def format_pauli(p: PauliOperator) -> str:
    return str(p)


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    return a * b


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return a.commutes(b)


def weight(a: PauliOperator) -> int:
    return a.weight


def product(ops: Iterable[PauliOperator], n: int) -> PauliOperator:
    return reduce(lambda a, b: a * b, ops, PauliOperator.identity(n))


def enumerate_paulis(n: int, w: int):
    """Yield every unsigned Pauli of weight exactly ``w`` (support-lexicographic)."""
    from itertools import combinations, product as cartesian

    for qs in combinations(range(n), w):
        for kinds in cartesian((1, 2, 3), repeat=w):
            z = x = 0
            for q, k in zip(qs, kinds):
                if k & 1:
                    x |= 1 << q
                if k & 2:
                    z |= 1 << q
            yield PauliOperator(n, z, x).unsigned()


# ---------------------------------------------------------------------------
# GF(2) linear algebra


@dataclass(frozen=True, eq=False)
class BinMatrix:
    """Dense binary matrix; rows are the unit of row operations."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bits, dtype=np.uint8) & 1
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @classmethod
    def from_masks(cls, masks: Sequence[int], cols: int) -> BinMatrix:
        arr = np.array([[(m >> j) & 1 for j in range(cols)] for m in masks], dtype=np.uint8)
        return cls(arr.reshape(len(masks), cols))

    @classmethod
    def identity(cls, n: int) -> BinMatrix:
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def rank(self) -> int:
        return gf2_rank(self)

    def __eq__(self, other):
        return isinstance(other, BinMatrix) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.bits.shape, self.bits.tobytes()))


def _as_array(m) -> np.ndarray:
    if isinstance(m, BinMatrix):
        return m.bits.copy()
    return np.array(m, dtype=np.uint8) & 1


def row_reduce(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2) and its pivot columns."""
    a = _as_array(m)
    if a.ndim == 1:
        a = a[None, :]
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        p = r + hit[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def gf2_rank(m) -> int:
    a = _as_array(m)
    if a.size == 0:
        return 0
    return len(row_reduce(a)[1])


def gf2_solve(m, b) -> np.ndarray | None:
    """Some ``x`` with ``m @ x = b`` over GF(2), or None if inconsistent."""
    a = _as_array(m)
    b = np.asarray(b, dtype=np.uint8).reshape(-1) & 1
    rows, cols = a.shape
    red, piv = row_reduce(np.concatenate([a, b[:, None]], axis=1))
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for r, c in enumerate(piv):
        x[c] = red[r, cols]
    return x


def gf2_nullspace(m) -> np.ndarray:
    """Basis (as rows) of ``{x : m @ x = 0}``."""
    a = _as_array(m)
    cols = a.shape[1]
    red, piv = row_reduce(a) if a.shape[0] else (a, [])
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, c in enumerate(piv):
            basis[k, c] = red[r, f]
    return basis


def symplectic_matrix(ops: Sequence[PauliOperator]) -> BinMatrix:
    if not ops:
        return BinMatrix(np.zeros((0, 0), dtype=np.uint8))
    return BinMatrix(np.array([p.symplectic() for p in ops], dtype=np.uint8))


def pauli_rank(ops: Sequence[PauliOperator]) -> int:
    """GF(2) rank of the operators' symplectic vectors (phases ignored)."""
    return gf2_rank(symplectic_matrix(ops)) if ops else 0


def same_group(a: Sequence[PauliOperator], b: Sequence[PauliOperator]) -> bool:
    """Projective equality of the groups generated by ``a`` and ``b``."""
    ra, rb = pauli_rank(a), pauli_rank(b)
    return ra == rb == pauli_rank(list(a) + list(b))


def commutation_matrix(rows: Sequence[PauliOperator], cols: Sequence[PauliOperator]) -> BinMatrix:
    """Entry (i, a) is 1 iff ``rows[i]`` anticommutes with ``cols[a]``."""
    arr = np.array(
        [[0 if r.commutes(c) else 1 for c in cols] for r in rows], dtype=np.uint8
    ).reshape(len(rows), len(cols))
    return BinMatrix(arr)
