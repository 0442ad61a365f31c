"""Algebra of +-1 measurement operators and their two-qubit gate costs.

An expression is a tree of Hermitian Pauli leaves combined by logical AND
(positive eigenspace = intersection, operator ``2 prod P_i - I``) and XOR
(positive eigenspace = symmetric difference, operator ``(-1)^(l-1) prod M_i``).
Expressions act on amplitude arrays directly, so measuring one never builds
a dense matrix; ``eval_dense`` exists as a numerical oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from . import kernels
from ._config import OP_TOL
from .exceptions import LengthMismatchError, NonCommutingError
from .pauli import PauliOperator
from .statevec import check_budget

DENSE_COMMUTE_LIMIT = 8


class MeasurementExpr:
    """Base class; subclasses are frozen dataclasses."""

    n: int

    def apply(self, amps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def leaves(self) -> list[PauliOperator]:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.label()


@dataclass(frozen=True)
class Leaf(MeasurementExpr):
    op: PauliOperator

    def __post_init__(self):
        if not self.op.is_hermitian:
            raise ValueError(f"{self.op} is not Hermitian and cannot be measured")

    @property
    def n(self) -> int:
        return self.op.n

    def apply(self, amps):
        return kernels.apply_pauli(amps, self.op.z, self.op.x, self.op.phase)

    def leaves(self):
        return [self.op]

    def label(self):
        return str(self.op)


def _common_n(children: Sequence[MeasurementExpr]) -> int:
    ns = {c.n for c in children}
    if len(ns) != 1:
        raise LengthMismatchError(f"children act on different qubit counts {sorted(ns)}")
    return ns.pop()


def _exprs_commute(a: MeasurementExpr, b: MeasurementExpr) -> bool:
    # leaves pairwise commuting is sufficient; fall back to dense otherwise
    if all(p.commutes(q) for p in a.leaves() for q in b.leaves()):
        return True
    if a.n > DENSE_COMMUTE_LIMIT:
        raise NonCommutingError(
            f"cannot certify commutation symbolically and n={a.n} exceeds the dense check limit"
        )
    ma, mb = eval_dense(a), eval_dense(b)
    return bool(np.max(np.abs(ma @ mb - mb @ ma)) <= OP_TOL)


def _check_commuting(children: Sequence[MeasurementExpr], what: str):
    for a, b in combinations(children, 2):
        if not _exprs_commute(a, b):
            raise NonCommutingError(f"{what} children {a.label()} and {b.label()} do not commute")


@dataclass(frozen=True)
class And(MeasurementExpr):
    children: tuple[MeasurementExpr, ...]
    n: int = field(init=False)

    def __post_init__(self):
        kids = tuple(self.children)
        if not kids:
            raise ValueError("AND needs at least one operand")
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "n", _common_n(kids))
        _check_commuting(kids, "AND")

    def apply(self, amps):
        v = amps
        for c in self.children:
            v = 0.5 * (v + c.apply(v))
        return 2.0 * v - amps

    def leaves(self):
        return [p for c in self.children for p in c.leaves()]

    def label(self):
        return "AND(" + ", ".join(c.label() for c in self.children) + ")"


@dataclass(frozen=True)
class Xor(MeasurementExpr):
    children: tuple[MeasurementExpr, ...]
    n: int = field(init=False)

    def __post_init__(self):
        kids = tuple(self.children)
        if not kids:
            raise ValueError("XOR needs at least one operand")
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "n", _common_n(kids))
        _check_commuting(kids, "XOR")

    def apply(self, amps):
        v = amps
        for c in self.children:
            v = c.apply(v)
        return v if len(self.children) % 2 else -v

    def leaves(self):
        return [p for c in self.children for p in c.leaves()]

    def label(self):
        return "XOR(" + ", ".join(c.label() for c in self.children) + ")"


def _as_expr(m) -> MeasurementExpr:
    return Leaf(m) if isinstance(m, PauliOperator) else m


def and_expr(ms: Sequence) -> MeasurementExpr:
    """Logical AND; Pauli operators are wrapped as leaves."""
    return And(tuple(_as_expr(m) for m in ms))


def xor_expr(ms: Sequence) -> MeasurementExpr:
    return Xor(tuple(_as_expr(m) for m in ms))


@lru_cache(maxsize=256)
def _dense_cached(expr: MeasurementExpr) -> np.ndarray:
    dim = 1 << expr.n
    mat = expr.apply(np.eye(dim, dtype=np.complex128))
    herm = np.max(np.abs(mat - mat.conj().T))
    unit = np.max(np.abs(mat @ mat - np.eye(dim)))
    if herm > OP_TOL or unit > OP_TOL:
        raise NonCommutingError(
            f"composed operator is not a +-1 observable (Hermitian defect {herm:.3g}, "
            f"M^2 - I defect {unit:.3g})"
        )
    mat.setflags(write=False)
    return mat


def eval_dense(expr) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix of an expression, validated Hermitian with ``M^2 = I``."""
    expr = _as_expr(expr)
    check_budget(expr.n)
    return _dense_cached(expr)


def positive_projector(expr) -> np.ndarray:
    m = eval_dense(expr)
    return 0.5 * (np.eye(m.shape[0]) + m)


def conjugate_expr(expr: MeasurementExpr, e: PauliOperator) -> MeasurementExpr:
    """``E M E^dagger``: positive eigenspace moves to ``E`` applied to the old one."""
    if isinstance(expr, Leaf):
        return Leaf(e.conjugate(expr.op))
    kids = tuple(conjugate_expr(c, e) for c in expr.children)
    return And(kids) if isinstance(expr, And) else Xor(kids)


def detection_expr(ust) -> MeasurementExpr:
    """``XOR_j AND_i M_ij`` whose positive eigenspace is the USt code space.

    ``M_ij = t_j G_i t_j^dagger`` are the base generators conjugated by each
    translation. With no base generators each block is the identity leaf.
    """
    from .stabilizer import conjugated_sign_matrix

    sm = conjugated_sign_matrix(ust)
    rows, cols = sm.shape
    blocks = []
    for j in range(cols):
        if rows == 0:
            blocks.append(Leaf(PauliOperator.identity(ust.n)))
        else:
            blocks.append(And(tuple(Leaf(sm.operator(i, j)) for i in range(rows))))
    return Xor(tuple(blocks))


# ---------------------------------------------------------------------------
# gate-cost accounting


@dataclass(frozen=True)
class CostEntry:
    formula: str
    params: dict
    value: int | None
    order: str | None = None
    flagged: bool = False
    ancillas: int | None = None
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "formula": self.formula,
            "params": dict(self.params),
            "value": self.value,
            "order": self.order,
            "flagged": self.flagged,
            "ancillas": self.ancillas,
            "note": self.note,
        }


def _need(params: dict, names: Sequence[str], formula: str):
    missing = [k for k in names if k not in params]
    if missing:
        raise ValueError(f"{formula} needs parameters {missing}")
    for k in names:
        v = params[k]
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
            raise ValueError(f"{formula}: parameter {k}={v!r} must be a nonnegative integer")


class GateCostModel:
    """Two-qubit gate counts as upper bounds, one named formula each.

    Single-qubit gates are not counted. Every formula records the number of
    ancillas it assumes. ``generic_extra_controls`` sets the Toffoli width used
    by ``generic_cws``: 1 gives the (n+1)-qubit gate of the ancilla-coupled
    circuit, 0 gives a bare n-qubit gate.
    """

    def __init__(self, generic_extra_controls: int = 1):
        if generic_extra_controls not in (0, 1):
            raise ValueError("generic_extra_controls must be 0 or 1")
        self.generic_extra_controls = generic_extra_controls

    FORMULAS = (
        "and_chain",
        "xor_chain",
        "ust_detection",
        "ust_recovery_measurement",
        "generic_cws",
        "multicontrol_toffoli",
    )

    def cost(self, formula: str, **params) -> CostEntry:
        fn = getattr(self, f"_{formula}", None)
        if formula not in self.FORMULAS or fn is None:
            raise ValueError(f"unknown cost formula {formula!r}; known: {', '.join(self.FORMULAS)}")
        return fn(params)

    def _and_chain(self, p):
        _need(p, ("ell", "n"), "and_chain")
        if p["ell"] < 1 or p["n"] < 1:
            raise ValueError("and_chain needs ell >= 1 and n >= 1")
        value = (2 * p["ell"] - 1) * (p["n"] + 1)
        return CostEntry("and_chain", dict(p), value, ancillas=2,
                         note="2l-1 controlled Paulis plus 2l-1 controlled one-qubit gates")

    def _xor_chain(self, p):
        if "parts" not in p:
            raise ValueError("xor_chain needs parameter 'parts'")
        parts = list(p["parts"])
        vals = []
        for part in parts:
            v = part.value if isinstance(part, CostEntry) else part
            if v is None:
                return CostEntry("xor_chain", {"parts": len(parts)}, None, flagged=True,
                                 note="a part has no closed-form count")
            if v < 0:
                raise ValueError("xor_chain parts must be nonnegative")
            vals.append(int(v))
        return CostEntry("xor_chain", {"parts": len(parts)}, sum(vals),
                         note="concatenated measurements, no overhead")

    def _ust_params(self, p, formula):
        _need(p, ("K", "n", "k"), formula)
        if p["K"] < 1 or p["k"] > p["n"]:
            raise ValueError(f"{formula} needs K >= 1 and k <= n")

    def _ust_detection(self, p):
        self._ust_params(p, "ust_detection")
        value = 2 * p["K"] * (p["n"] - p["k"]) * (p["n"] + 1)
        return CostEntry("ust_detection", dict(p), value, ancillas=2,
                         note="K AND blocks of n-k Pauli measurements, bound 2K(n-k)(n+1)")

    def _ust_recovery_measurement(self, p):
        self._ust_params(p, "ust_recovery_measurement")
        if p["n"] - p["k"] < 1:
            raise ValueError("ust_recovery_measurement needs k < n")
        value = 2 * p["K"] * (p["n"] + 1) * (p["n"] - p["k"] - 1)
        return CostEntry("ust_recovery_measurement", dict(p), value, ancillas=2,
                         note="per-measurement bound 2K(n+1)(n-k-1), as stated for recovery")

    def _multicontrol_toffoli(self, p):
        _need(p, ("m",), "multicontrol_toffoli")
        m = p["m"]
        if m >= 6:
            return CostEntry("multicontrol_toffoli", dict(p), 8 * (m - 4), ancillas=1,
                             note="m-qubit Toffoli from three-qubit Toffolis")
        return CostEntry("multicontrol_toffoli", dict(p), None, order="O(m^2)", flagged=True,
                         ancillas=0, note="8(m-4) count only holds for m >= 6; no-ancilla fallback")

    def _generic_cws(self, p):
        _need(p, ("n", "K"), "generic_cws")
        n, K = p["n"], p["K"]
        if K < 1 or n < 1:
            raise ValueError("generic_cws needs n >= 1 and K >= 1")
        m = n + self.generic_extra_controls
        tof = self._multicontrol_toffoli({"m": m})
        if tof.value is None:
            return CostEntry("generic_cws", dict(p), None, order="(1+K) O(n^2)", flagged=True,
                             ancillas=0, note=f"{m}-qubit Toffoli below 6 qubits; no-ancilla fallback")
        return CostEntry("generic_cws", dict(p), n * n + K * tof.value, ancillas=1,
                         note=f"encoder and inverse (n^2) plus K {m}-qubit Toffolis")


DEFAULT_COST_MODEL = GateCostModel()


def cost(formula: str, model: GateCostModel | None = None, **params) -> CostEntry:
    return (model or DEFAULT_COST_MODEL).cost(formula, **params)


def expression_cost(expr: MeasurementExpr) -> CostEntry:
    """Cost of an expression tree whose AND blocks hold Pauli leaves."""
    if isinstance(expr, Leaf):
        return cost("and_chain", ell=1, n=expr.n)
    if isinstance(expr, And):
        if all(isinstance(c, Leaf) for c in expr.children):
            return cost("and_chain", ell=len(expr.children), n=expr.n)
        return CostEntry("and_chain", {"n": expr.n}, None, flagged=True,
                         note="nested AND of composite operands")
    return cost("xor_chain", parts=[expression_cost(c) for c in expr.children])
