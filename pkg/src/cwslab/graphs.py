"""Graphs, graph-state generators, graph images and CWS codes in standard form."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product as cartesian
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from ._config import DEFAULT_ENUM_BUDGET
from .exceptions import BudgetExceededError, InvalidCodeError, LengthMismatchError
from .pauli import (
    BinMatrix,
    PauliOperator,
    bits_from_mask,
    mask_from_bits,
    pauli_rank,
    popcount,
)


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: BinMatrix

    def __post_init__(self):
        a = self.adjacency.bits
        if a.shape != (self.n, self.n):
            raise InvalidCodeError(f"adjacency must be {self.n}x{self.n}, got {a.shape}")
        if not np.array_equal(a, a.T):
            raise InvalidCodeError("adjacency matrix is not symmetric")
        if a.diagonal().any():
            raise InvalidCodeError("graph has self-loops")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        """Build from 1-based vertex pairs."""
        a = np.zeros((n, n), dtype=np.uint8)
        seen = set()
        for e in edges:
            i, j = (int(v) for v in e)
            if not (1 <= i <= n and 1 <= j <= n):
                raise InvalidCodeError(f"edge {(i, j)} references a vertex outside 1..{n}")
            if i == j:
                raise InvalidCodeError(f"self-loop at vertex {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidCodeError(f"duplicate edge {key}")
            seen.add(key)
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1
        return cls(n, BinMatrix(a))

    @classmethod
    def ring(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])

    @classmethod
    def edgeless(cls, n: int) -> Graph:
        return cls(n, BinMatrix(np.zeros((n, n), dtype=np.uint8)))

    @property
    def rows(self) -> tuple[int, ...]:
        """Adjacency rows ``r_i`` as masks (qubit 1 in bit 0)."""
        a = self.adjacency.bits
        return tuple(int(sum(int(a[i, j]) << j for j in range(self.n))) for i in range(self.n))

    @property
    def upper_rows(self) -> tuple[int, ...]:
        return tuple(r & ~((1 << (i + 1)) - 1) for i, r in enumerate(self.rows))

    @property
    def edges(self) -> list[tuple[int, int]]:
        a = self.adjacency.bits
        return [(i + 1, j + 1) for i in range(self.n) for j in range(i + 1, self.n) if a[i, j]]


def graph_generators(g: Graph) -> list[PauliOperator]:
    """``S_i = X_i Z^{r_i}`` for i = 1..n."""
    return [PauliOperator(g.n, z=r, x=1 << i) for i, r in enumerate(g.rows)]


def cl_map(g: Graph, e: PauliOperator) -> int:
    """Graph image of ``e`` as a mask: ``v xor (xor_l u_l r_l)``."""
    if e.n != g.n:
        raise LengthMismatchError(f"{e.n}-qubit error on {g.n}-vertex graph")
    out = e.z
    for l, r in enumerate(g.rows):
        if (e.x >> l) & 1:
            out ^= r
    return out


def cl_images(g: Graph, errors: Sequence[PauliOperator]) -> np.ndarray:
    for e in errors:
        if e.n != g.n:
            raise LengthMismatchError(f"{e.n}-qubit error on {g.n}-vertex graph")
    zs = np.fromiter((e.z for e in errors), dtype=np.int64, count=len(errors))
    xs = np.fromiter((e.x for e in errors), dtype=np.int64, count=len(errors))
    return kernels.cl_images(zs, xs, np.array(g.rows, dtype=np.int64))


@dataclass(frozen=True)
class ClassicalCode:
    n: int
    codewords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "codewords", tuple(int(c) for c in self.codewords))
        if not self.codewords:
            raise InvalidCodeError("classical code needs at least one codeword")
        if len(set(self.codewords)) != len(self.codewords):
            raise InvalidCodeError("codewords are not distinct")
        if any(c < 0 or c >> self.n for c in self.codewords):
            raise InvalidCodeError(f"codeword longer than n={self.n}")

    @classmethod
    def from_strings(cls, words: Sequence[str]) -> ClassicalCode:
        if not words:
            raise InvalidCodeError("classical code needs at least one codeword")
        n = len(words[0])
        if any(len(w) != n for w in words):
            raise InvalidCodeError("codewords have different lengths")
        return cls(n, tuple(mask_from_bits(w) for w in words))

    @property
    def K(self) -> int:
        return len(self.codewords)

    def strings(self) -> list[str]:
        return [bits_from_mask(c, self.n) for c in self.codewords]

    def differences(self) -> set[int]:
        """Nonzero ``c_i xor c_j`` over ordered pairs i != j."""
        cw = self.codewords
        return {a ^ b for a in cw for b in cw if a != b}


@dataclass(frozen=True)
class CwsCode:
    graph: Graph
    classical: ClassicalCode
    name: str | None = None

    def __post_init__(self):
        if self.graph.n != self.classical.n:
            raise InvalidCodeError(
                f"graph has {self.graph.n} vertices but codewords have length {self.classical.n}"
            )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def K(self) -> int:
        return self.classical.K

    @property
    def codewords(self) -> tuple[int, ...]:
        return self.classical.codewords

    def word_operators(self) -> list[PauliOperator]:
        return [PauliOperator.z_type(self.n, c) for c in self.codewords]


# ---------------------------------------------------------------------------
# error enumeration


def count_paulis(n: int, w: int) -> int:
    return comb(n, w) * 3**w


def pauli_masks(n: int, w: int, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """(z, x) mask arrays of every weight-``w`` Pauli, supports in lexicographic order."""
    total = count_paulis(n, w)
    if total > budget:
        raise BudgetExceededError(f"{total} weight-{w} Paulis on {n} qubits exceed budget {budget}")
    if w == 0:
        return np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)
    kinds = np.array(list(cartesian((1, 2, 3), repeat=w)), dtype=np.int64)  # X=1, Z=2, Y=3
    zs, xs = [], []
    for qs in combinations(range(n), w):
        shifts = np.array(qs, dtype=np.int64)
        xs.append(((kinds & 1) << shifts).sum(axis=1))
        zs.append((((kinds >> 1) & 1) << shifts).sum(axis=1))
    return np.concatenate(zs), np.concatenate(xs)


def errors_of_weight(n: int, w: int, budget: int = DEFAULT_ENUM_BUDGET) -> list[PauliOperator]:
    zs, xs = pauli_masks(n, w, budget)
    return [PauliOperator(n, int(z), int(x)).unsigned() for z, x in zip(zs, xs)]


def errors_up_to(n: int, t: int, budget: int = DEFAULT_ENUM_BUDGET) -> list[PauliOperator]:
    """All unsigned Paulis of weight <= t, identity first, then by weight."""
    total = sum(count_paulis(n, w) for w in range(t + 1))
    if total > budget:
        raise BudgetExceededError(f"{total} Paulis of weight <= {t} exceed budget {budget}")
    out: list[PauliOperator] = []
    for w in range(t + 1):
        out.extend(errors_of_weight(n, w, budget))
    return out


def errors_on(n: int, qubits: Iterable[int]) -> list[PauliOperator]:
    """All 4^s unsigned Paulis supported inside the 1-based ``qubits``."""
    qs = sorted(qubits)
    out = []
    for kinds in cartesian((0, 1, 2, 3), repeat=len(qs)):
        z = x = 0
        for q, k in zip(qs, kinds):
            if k & 1:
                x |= 1 << (q - 1)
            if k & 2:
                z |= 1 << (q - 1)
        out.append(PauliOperator(n, z, x).unsigned())
    return sorted(out, key=lambda p: (p.weight, p.z | p.x, p.x, p.z))


# ---------------------------------------------------------------------------
# detection / correction


@dataclass
class DetectionReport:
    passed: bool
    checked: int
    failures: list[tuple[PauliOperator, str]] = field(default_factory=list)


def _codeword_parities(code: CwsCode, xs: np.ndarray) -> np.ndarray:
    """Bit-packed anticommutation pattern of each X-mask with every ``Z^{c_i}``."""
    packed = np.zeros(xs.shape, dtype=object if code.K > 62 else np.int64)
    for k, c in enumerate(code.codewords):
        bit = kernels.parity(xs & c)
        packed = packed | (bit.astype(packed.dtype) << k)
    return packed


def _detect_masks(code: CwsCode, zs: np.ndarray, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    images = kernels.cl_images(zs, xs, np.array(code.graph.rows, dtype=np.int64))
    diffs = np.array(sorted(code.classical.differences()), dtype=np.int64)
    classical_fail = (images != 0) & np.isin(images, diffs)
    full = (1 << code.K) - 1
    packed = _codeword_parities(code, xs)
    # on image-0 errors the sign picked up on |w_i> must not depend on i
    phase_fail = (images == 0) & (packed != 0) & (packed != full)
    return classical_fail, phase_fail


def detects(code: CwsCode, errors: Sequence[PauliOperator]) -> DetectionReport:
    """Check the graph-image detection conditions for every error."""
    for e in errors:
        if e.n != code.n:
            raise LengthMismatchError(f"{e.n}-qubit error for {code.n}-qubit code")
    zs = np.fromiter((e.z for e in errors), dtype=np.int64, count=len(errors))
    xs = np.fromiter((e.x for e in errors), dtype=np.int64, count=len(errors))
    cf, pf = _detect_masks(code, zs, xs)
    failures = []
    for k, e in enumerate(errors):
        if cf[k]:
            failures.append((e, "classical: Cl image equals a codeword difference"))
        elif pf[k]:
            failures.append((e, "phase: Cl image is 0 but sign differs across codewords"))
    return DetectionReport(not failures, len(errors), failures)


@dataclass
class CorrectionReport:
    correctable: bool
    witness: tuple[PauliOperator, PauliOperator] | None = None
    reason: str | None = None

    def __bool__(self):
        return self.correctable


def corrects(
    code: CwsCode, errors: Sequence[PauliOperator], budget: int = DEFAULT_ENUM_BUDGET
) -> CorrectionReport:
    """True iff every ``E1^dagger E2`` over the error set is detected."""
    m = len(errors)
    if m * (m - 1) // 2 > budget:
        raise BudgetExceededError(f"{m} errors give too many pairs for budget {budget}")
    if m == 0:
        return CorrectionReport(True)
    zs = np.fromiter((e.z for e in errors), dtype=np.int64, count=m)
    xs = np.fromiter((e.x for e in errors), dtype=np.int64, count=m)
    images = kernels.cl_images(zs, xs, np.array(code.graph.rows, dtype=np.int64))
    diffs = np.array(sorted(code.classical.differences()), dtype=np.int64)
    packed = _codeword_parities(code, xs)
    full = (1 << code.K) - 1
    pair_img = images[:, None] ^ images[None, :]
    classical_fail = np.isin(pair_img, diffs) & (pair_img != 0)
    pp = packed[:, None] ^ packed[None, :]
    phase_fail = (pair_img == 0) & (pp != 0) & (pp != full)
    bad = np.triu(classical_fail | phase_fail, k=1)
    if not bad.any():
        return CorrectionReport(True)
    i, j = (int(v) for v in np.argwhere(bad)[0])
    reason = "classical" if classical_fail[i, j] else "phase"
    return CorrectionReport(False, (errors[i], errors[j]), reason)


def distance(code: CwsCode, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Exhaustive distance.

    For K >= 2 this is the smallest weight carrying an undetected error. A
    single-codeword code is a stabilizer state and uses the stabilizer-state
    convention: minimum weight of a nontrivial operator fixing the state.
    """
    spent = 0
    for w in range(1, code.n + 1):
        spent += count_paulis(code.n, w)
        if spent > budget:
            raise BudgetExceededError(f"distance search exceeded budget {budget} at weight {w}")
        zs, xs = pauli_masks(code.n, w, budget)
        if code.K == 1:
            images = kernels.cl_images(zs, xs, np.array(code.graph.rows, dtype=np.int64))
            if (images == 0).any():
                return w
            continue
        cf, pf = _detect_masks(code, zs, xs)
        if cf.any() or pf.any():
            return w
    return code.n + 1


@dataclass
class DegeneracyPartition:
    classes: dict[int, tuple[PauliOperator, ...]]
    trivial_class: tuple[PauliOperator, ...]

    def labels(self, n: int) -> list[str]:
        return [bits_from_mask(b, n) for b in self.classes]

    def representative(self, image: int) -> PauliOperator:
        return self.classes[image][0]


def canonical_key(p: PauliOperator):
    return (p.weight, p.z | p.x, p.x, p.z)


def image_key(b: int):
    return (popcount(b), b)


def degeneracy_classes(code: CwsCode, errors: Sequence[PauliOperator]) -> DegeneracyPartition:
    """Group errors by graph image; labels ordered by (weight, mask)."""
    images = cl_images(code.graph, errors)
    groups: dict[int, list[PauliOperator]] = {}
    for e, b in zip(errors, images):
        groups.setdefault(int(b), []).append(e)
    classes = {
        b: tuple(sorted(groups[b], key=canonical_key)) for b in sorted(groups, key=image_key)
    }
    trivial = ()
    if 0 in classes:
        zero = classes[0]
        rep = detects(code, list(zero))
        bad = {id(e) for e, _ in rep.failures}
        trivial = tuple(e for e in zero if id(e) not in bad)
    return DegeneracyPartition(classes, trivial)


def is_additive(code: CwsCode) -> bool:
    cw = set(code.codewords)
    if 0 not in cw:
        return False
    return all(a ^ b in cw for a in cw for b in cw)


def linear_basis(masks: Iterable[int]) -> list[int]:
    """Greedy GF(2)-independent subset, preserving input order."""
    basis: list[int] = []
    reduced: list[tuple[int, int]] = []  # (pivot bit, vector)
    for m in masks:
        v = m
        for piv, r in reduced:
            if (v >> piv) & 1:
                v ^= r
        if v:
            piv = v.bit_length() - 1
            reduced = [(p, r ^ v if (r >> piv) & 1 else r) for p, r in reduced]
            reduced.append((piv, v))
            basis.append(m)
    return basis


# ---------------------------------------------------------------------------
# standard form from a stabilizer presentation


def standard_form_from_stabilizer(
    generators: Sequence[PauliOperator],
    logical_x: Sequence[PauliOperator],
    logical_z: Sequence[PauliOperator],
    name: str | None = None,
) -> CwsCode:
    """Recombine ``<G_1..G_{n-k}, Zbar_1..Zbar_k>`` into graph form without qubit rotations.

    Works when the X parts of the combined generators are invertible and the
    resulting Z parts form a simple graph; anything else needs a local-Clifford
    rotation and is rejected.
    """
    full = list(generators) + list(logical_z)
    if not full:
        raise InvalidCodeError("no generators")
    n = full[0].n
    if len(full) != n:
        raise InvalidCodeError(f"need n={n} generators plus logical Z, got {len(full)}")
    if pauli_rank(full) != n or any(not a.commutes(b) for a in full for b in full):
        raise InvalidCodeError("generators with logical Z are not an independent commuting set")
    ops = list(full)
    for q in range(n):
        piv = next((r for r in range(q, n) if (ops[r].x >> q) & 1), None)
        if piv is None:
            raise InvalidCodeError(
                f"no generator combination carries a lone X on qubit {q + 1}; "
                "a local-Clifford rotation is required"
            )
        ops[q], ops[piv] = ops[piv], ops[q]
        for r in range(n):
            if r != q and (ops[r].x >> q) & 1:
                ops[r] = ops[r] * ops[q]
    rows = []
    signs = 0
    for i, op in enumerate(ops):
        if (op.z >> i) & 1:
            raise InvalidCodeError(f"generator for qubit {i + 1} has Y on its own vertex")
        if not op.is_hermitian:
            raise InvalidCodeError(f"recombined generator {op} is not Hermitian")
        rows.append(op.z)
        if op.sign < 0:
            signs |= 1 << i
    adj = BinMatrix.from_masks(rows, n)
    try:
        graph = Graph(n, adj)
    except InvalidCodeError as exc:
        raise InvalidCodeError(f"recombined generators do not form a graph: {exc}") from None
    words = []
    k = len(logical_x)
    for bits in range(1 << k):
        xbar = PauliOperator.identity(n)
        for j in range(k):
            if (bits >> j) & 1:
                xbar = xbar * logical_x[j]
        for i in range(n):
            if (xbar.x >> i) & 1:
                xbar = xbar * ops[i]
        words.append(xbar.z ^ signs)
    return CwsCode(graph, ClassicalCode(n, tuple(words)), name)
