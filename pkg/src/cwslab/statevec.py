"""Dense state-vector backend.

Amplitude index bit ``q - 1`` holds qubit ``q``, the same convention as the
Pauli masks, so a Pauli acts on an amplitude array by an index XOR and a
parity sign. ``basis_label`` converts an index to the usual ket string with
qubit 1 leftmost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from ._config import AMP_TOL, GRAM_TOL, dense_budget
from .exceptions import BudgetExceededError, InconsistentCodeError, LengthMismatchError
from .graphs import CwsCode, Graph
from .pauli import PauliOperator, mask_from_bits


def check_budget(n: int):
    cap = dense_budget()
    if n > cap:
        raise BudgetExceededError(f"{n} qubits exceed the dense budget of {cap}")


def basis_index(label: str) -> int:
    """``"011"`` (qubit 1 leftmost) -> amplitude index."""
    return mask_from_bits(label)


def basis_label(index: int, n: int) -> str:
    return "".join(str((index >> q) & 1) for q in range(n))


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, n: int, label: str | int = 0) -> StateVector:
        check_budget(n)
        idx = basis_index(label) if isinstance(label, str) else int(label)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[idx] = 1.0
        return cls(n, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        nrm = self.norm
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.n, self.amplitudes / nrm)

    def inner(self, other: StateVector) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def allclose(self, other: StateVector, tol: float = AMP_TOL) -> bool:
        return bool(np.max(np.abs(self.amplitudes - other.amplitudes)) <= tol)

    def equal_up_to_phase(self, other: StateVector, tol: float = AMP_TOL) -> bool:
        ov = self.inner(other)
        if abs(ov) < tol:
            return False
        phase = ov / abs(ov)
        return bool(np.max(np.abs(self.amplitudes * phase - other.amplitudes)) <= tol)


def apply_pauli(p: PauliOperator, v: StateVector) -> StateVector:
    if p.n != v.n:
        raise LengthMismatchError(f"{p.n}-qubit Pauli on {v.n}-qubit state")
    return StateVector(v.n, kernels.apply_pauli(v.amplitudes, p.z, p.x, p.phase))


def apply_pauli_array(p: PauliOperator, amps: np.ndarray) -> np.ndarray:
    return kernels.apply_pauli(amps, p.z, p.x, p.phase)


def graph_state(g: Graph) -> StateVector:
    """``prod CZ_ij H^n |0...0>``: signs from edges with both endpoints set."""
    check_budget(g.n)
    signs = kernels.graph_state_signs(g.n, np.array(g.upper_rows, dtype=np.int64))
    return StateVector(g.n, signs.astype(np.complex128) / np.sqrt(1 << g.n))


@dataclass(frozen=True)
class MeasurementResult:
    outcome: int
    state: StateVector
    probability: float
    p_plus: float


def measure(expr, v: StateVector, seed=None) -> MeasurementResult:
    """Born-rule measurement of a +-1 observable with ``P = (I + M)/2``.

    ``expr`` is anything with an ``apply(amplitudes)`` method returning ``M v``
    (a ``MeasurementExpr`` or a ``PauliOperator`` wrapped in a leaf).
    ``seed`` may be an int, ``None`` or a ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    check_budget(v.n)
    if expr.n != v.n:
        raise LengthMismatchError(f"{expr.n}-qubit observable on {v.n}-qubit state")
    mv = expr.apply(v.amplitudes)
    plus = 0.5 * (v.amplitudes + mv)
    minus = v.amplitudes - plus
    p_plus = float(np.vdot(plus, plus).real)
    p_minus = float(np.vdot(minus, minus).real)
    total = p_plus + p_minus
    p_plus, p_minus = p_plus / total, p_minus / total
    if rng.random() < p_plus:
        outcome, branch, prob = 1, plus, p_plus
    else:
        outcome, branch, prob = -1, minus, p_minus
    if prob <= 0.0:  # pragma: no cover - excluded by the draw above
        raise RuntimeError("sampled a zero-probability branch")
    return MeasurementResult(outcome, StateVector(v.n, branch / np.linalg.norm(branch)), prob, p_plus)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True, eq=False)
class Subspace:
    n: int
    basis: np.ndarray  # columns are orthonormal

    @classmethod
    def from_vectors(cls, n: int, vectors, tol: float = 1e-9) -> Subspace:
        """Orthonormal basis of the span of ``vectors`` (columns or StateVectors)."""
        if isinstance(vectors, np.ndarray):
            mat = vectors
        else:
            mat = np.column_stack([v.amplitudes if isinstance(v, StateVector) else v for v in vectors])
        if mat.size == 0:
            return cls(n, np.zeros((1 << n, 0), dtype=np.complex128))
        u, s, _ = np.linalg.svd(mat, full_matrices=False)
        rank = int((s > tol * max(1.0, s[0])).sum())
        return cls(n, u[:, :rank])

    @classmethod
    def from_orthonormal(cls, n: int, vectors: Sequence[StateVector]) -> Subspace:
        mat = np.column_stack([v.amplitudes for v in vectors])
        gram = mat.conj().T @ mat
        defect = float(np.max(np.abs(gram - np.eye(len(vectors))))) if len(vectors) else 0.0
        if defect > GRAM_TOL:
            raise InconsistentCodeError(f"basis Gram defect {defect:.3g} exceeds {GRAM_TOL}")
        return cls(n, mat)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def gram_defect(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(np.max(np.abs(self.basis.conj().T @ self.basis - np.eye(self.dim))))

    def project(self, v: StateVector) -> StateVector:
        return StateVector(self.n, self.basis @ (self.basis.conj().T @ v.amplitudes))

    def residual(self, v: StateVector) -> float:
        """Norm of the component of ``v`` outside this subspace."""
        return float(np.linalg.norm(v.amplitudes - self.project(v).amplitudes))

    def contains(self, v: StateVector, tol: float = AMP_TOL) -> bool:
        return self.residual(v) <= tol

    def apply_pauli(self, p: PauliOperator) -> Subspace:
        return Subspace(self.n, apply_pauli_array(p, self.basis))

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def vectors(self) -> list[StateVector]:
        return [StateVector(self.n, self.basis[:, j]) for j in range(self.dim)]

    def random_state(self, seed=None) -> StateVector:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        c = rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim)
        return StateVector(self.n, self.basis @ (c / np.linalg.norm(c)))


@dataclass(frozen=True)
class SubspaceRelation:
    kind: str  # "identical" | "orthogonal" | "overlapping"
    singular_values: tuple[float, ...]

    @property
    def principal_angles(self) -> tuple[float, ...]:
        return tuple(float(np.arccos(min(1.0, s))) for s in self.singular_values)


def subspace_relation(a: Subspace, b: Subspace, tol: float = AMP_TOL) -> SubspaceRelation:
    if a.n != b.n:
        raise LengthMismatchError(f"{a.n}-qubit vs {b.n}-qubit subspace")
    if a.dim == 0 or b.dim == 0:
        return SubspaceRelation("orthogonal", ())
    s = np.linalg.svd(a.basis.conj().T @ b.basis, compute_uv=False)
    sv = tuple(float(x) for x in s)
    if a.dim == b.dim and np.all(np.abs(s - 1.0) <= tol):
        kind = "identical"
    elif np.all(s <= tol):
        kind = "orthogonal"
    else:
        kind = "overlapping"
    return SubspaceRelation(kind, sv)


def stabilizer_code_basis(generators: Sequence[PauliOperator], n: int, seed: int = 0) -> Subspace:
    """Orthonormal basis of the joint +1 eigenspace of commuting Hermitian Paulis."""
    check_budget(n)
    dim = 1 << (n - len(generators))
    rng = np.random.default_rng(seed)
    mat = rng.normal(size=(1 << n, dim)) + 1j * rng.normal(size=(1 << n, dim))
    for g in generators:
        mat = 0.5 * (mat + apply_pauli_array(g, mat))
    q, r = np.linalg.qr(mat)
    if np.min(np.abs(np.diag(r))) < 1e-8:
        raise InconsistentCodeError("stabilizer projector has lower rank than expected")
    return Subspace(n, q)


def code_subspace(code, seed: int = 0) -> Subspace:
    """Orthonormal basis of a CWS code ``{W_i|s>}`` or a USt code ``{t_j (base basis)}``."""
    from .stabilizer import UstCode

    if isinstance(code, CwsCode):
        s = graph_state(code.graph)
        return Subspace.from_orthonormal(code.n, [apply_pauli(w, s) for w in code.word_operators()])
    if isinstance(code, UstCode):
        base = stabilizer_code_basis(code.base_stabilizer.generators, code.n, seed)
        cols = [apply_pauli_array(t, base.basis) for t in code.translations]
        mat = np.concatenate(cols, axis=1)
        sub = Subspace(code.n, mat)
        defect = sub.gram_defect()
        if defect > GRAM_TOL:
            raise InconsistentCodeError(f"USt basis Gram defect {defect:.3g} exceeds {GRAM_TOL}")
        return sub
    raise TypeError(f"unsupported code type {type(code).__name__}")


def corrupted_space(code_space: Subspace, e: PauliOperator) -> Subspace:
    return code_space.apply_pauli(e)
