"""Stabilizer groups, symplectic Gram-Schmidt, and union-stabilizer (USt) codes.

The auxiliary codes used by structured recovery are built here: given a CWS
code and a group ``D`` of Z-type graph images, ``build_aux_ust`` returns the
USt code whose translations are the codeword operators and whose base code
is stabilized by the graph generators that commute with all of ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterator, Sequence

import numpy as np

from .exceptions import GramSchmidtRankError, InvalidCodeError, LengthMismatchError
from .graphs import CwsCode, graph_generators
from .pauli import (
    BinMatrix,
    PauliOperator,
    commutation_matrix,
    gf2_nullspace,
    pauli_rank,
    product,
)


def _same_n(ops: Sequence[PauliOperator]) -> int | None:
    ns = {p.n for p in ops}
    if len(ns) > 1:
        raise LengthMismatchError(f"operators act on different qubit counts {sorted(ns)}")
    return ns.pop() if ns else None


@dataclass(frozen=True)
class StabilizerGroup:
    generators: tuple[PauliOperator, ...]
    n: int

    def __init__(self, generators: Sequence[PauliOperator], n: int | None = None):
        gens = tuple(generators)
        m = _same_n(gens)
        if m is None and n is None:
            raise InvalidCodeError("empty stabilizer needs an explicit qubit count")
        n = m if n is None else n
        if m is not None and m != n:
            raise LengthMismatchError(f"generators act on {m} qubits, expected {n}")
        for i, a in enumerate(gens):
            if not a.is_hermitian:
                raise InvalidCodeError(f"generator {a} is not Hermitian")
            for b in gens[i + 1 :]:
                if not a.commutes(b):
                    raise InvalidCodeError(f"generators {a} and {b} anticommute")
        # independent Hermitian commuting generators cannot produce -I
        if pauli_rank(gens) != len(gens):
            raise InvalidCodeError("stabilizer generators are not independent")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "n", n)

    def __len__(self):
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - len(self.generators)

    def syndrome(self, e: PauliOperator) -> tuple[int, ...]:
        return syndrome(self, e)

    def elements(self) -> Iterator[PauliOperator]:
        for bits in cartesian((0, 1), repeat=len(self.generators)):
            yield product((g for g, b in zip(self.generators, bits) if b), self.n)

    def contains(self, p: PauliOperator, exact: bool = True) -> bool:
        """Membership; ``exact=False`` ignores the phase."""
        if pauli_rank(list(self.generators) + [p]) != len(self.generators):
            return False
        if not exact:
            return True
        # p is a product of generators; find which and compare phases
        from .pauli import gf2_solve, symplectic_matrix

        mat = symplectic_matrix(list(self.generators)).bits.T
        sol = gf2_solve(mat, p.symplectic())
        prod = product((g for g, b in zip(self.generators, sol) if b), self.n)
        return prod == p


def syndrome(code: StabilizerGroup, e: PauliOperator) -> tuple[int, ...]:
    """Bit i is 1 iff ``e`` anticommutes with generator i."""
    if e.n != code.n:
        raise LengthMismatchError(f"{e.n}-qubit error for {code.n}-qubit stabilizer")
    return tuple(0 if g.commutes(e) else 1 for g in code.generators)


def symplectic_gram_schmidt(
    gens: Sequence[PauliOperator], targets: Sequence[PauliOperator]
) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """Recombine ``gens`` so that ``paired[a]`` is the only one anticommuting with ``targets[a]``.

    Targets are processed in order; each takes the lowest-index unpaired
    generator that anticommutes with it as pivot and clears that
    anticommutation from every other generator (paired or not) by
    multiplying with the pivot. Returns ``(paired, remainder)``; the remainder
    keeps the input order and commutes with every target.
    """
    gens = list(gens)
    targets = list(targets)
    _same_n(gens + targets)
    if pauli_rank(targets) != len(targets):
        raise GramSchmidtRankError("targets are not independent")
    pool: list[PauliOperator | None] = list(gens)
    paired: list[PauliOperator] = []
    for t in targets:
        piv_idx = next(
            (i for i, g in enumerate(pool) if g is not None and not g.commutes(t)), None
        )
        if piv_idx is None:
            raise GramSchmidtRankError(
                f"target {t} commutes with every remaining generator; "
                "targets not independently detectable"
            )
        piv = pool[piv_idx]
        pool[piv_idx] = None
        for i, g in enumerate(pool):
            if g is not None and not g.commutes(t):
                pool[i] = g * piv
        paired = [p * piv if not p.commutes(t) else p for p in paired]
        paired.append(piv)
    remainder = [g for g in pool if g is not None]
    return paired, remainder


@dataclass(frozen=True)
class ErrorGroup:
    """Abelian group given by independent generators; elements enumerated lazily."""

    generators: tuple[PauliOperator, ...]
    n: int

    def __init__(self, generators: Sequence[PauliOperator], n: int | None = None):
        gens = tuple(generators)
        m = _same_n(gens)
        n = m if n is None else n
        if n is None:
            raise InvalidCodeError("empty group needs an explicit qubit count")
        for i, a in enumerate(gens):
            for b in gens[i + 1 :]:
                if not a.commutes(b):
                    raise InvalidCodeError(f"group generators {a} and {b} anticommute")
        if pauli_rank(gens) != len(gens):
            raise InvalidCodeError("group generators are not independent")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_images(cls, n: int, images: Sequence[int]) -> ErrorGroup:
        return cls([PauliOperator.z_type(n, b) for b in images], n)

    @property
    def m(self) -> int:
        return len(self.generators)

    def __len__(self):
        return 1 << len(self.generators)

    def elements(self) -> Iterator[PauliOperator]:
        for bits in cartesian((0, 1), repeat=self.m):
            yield product((g for g, b in zip(self.generators, bits) if b), self.n)


def subgroup_without(group: ErrorGroup, l: int) -> ErrorGroup:
    """Drop the 1-based generator ``l``."""
    if not 1 <= l <= group.m:
        raise IndexError(f"generator index {l} outside 1..{group.m}")
    gens = [g for i, g in enumerate(group.generators, start=1) if i != l]
    return ErrorGroup(gens, group.n)


@dataclass(frozen=True)
class UstCode:
    base_stabilizer: StabilizerGroup
    translations: tuple[PauliOperator, ...]
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "translations", tuple(self.translations))
        if not self.translations:
            raise InvalidCodeError("USt code needs at least one translation")
        if any(t.n != self.n for t in self.translations):
            raise LengthMismatchError("translation length differs from base code")
        ts = self.translations
        for i in range(len(ts)):
            for j in range(i + 1, len(ts)):
                rel = ts[i].dagger() * ts[j]
                if all(g.commutes(rel) for g in self.base_stabilizer.generators):
                    raise InvalidCodeError(
                        f"translations {i + 1} and {j + 1} are equivalent on the base code"
                    )

    @property
    def n(self) -> int:
        return self.base_stabilizer.n

    @property
    def k(self) -> int:
        return self.base_stabilizer.k

    @property
    def K(self) -> int:
        return len(self.translations)

    @property
    def dimension(self) -> int:
        return self.K << self.k


def cws_as_ust(code: CwsCode) -> UstCode:
    """A CWS code is the USt code over the graph state with its word operators."""
    return UstCode(
        StabilizerGroup(graph_generators(code.graph), code.n), code.word_operators(), code.name
    )


def build_aux_ust(code: CwsCode, group: ErrorGroup) -> UstCode:
    """The USt code ``D(Q)``: base stabilized by graph generators commuting with ``D``."""
    if group.n != code.n:
        raise LengthMismatchError(f"{group.n}-qubit group for {code.n}-qubit code")
    _, remainder = symplectic_gram_schmidt(graph_generators(code.graph), group.generators)
    return UstCode(StabilizerGroup(remainder, code.n), code.word_operators(), code.name)


@dataclass(frozen=True)
class SignMatrix:
    signs: np.ndarray  # (generators, translations) of +1/-1
    generators: tuple[PauliOperator, ...]

    @property
    def shape(self):
        return self.signs.shape

    def operator(self, i: int, j: int) -> PauliOperator:
        """``M_{i,j} = t_j G_i t_j^dagger`` (0-based indices)."""
        g = self.generators[i]
        return g if self.signs[i, j] > 0 else -g

    def row(self, g: PauliOperator) -> tuple[int, ...]:
        for i, h in enumerate(self.generators):
            if h.equiv(g):
                return tuple(int(s) for s in self.signs[i] * (h.sign * g.sign))
        raise KeyError(f"{g} is not a generator of this matrix")

    def pretty(self) -> list[str]:
        return ["".join("+" if s > 0 else "-" for s in row) for row in self.signs]


def conjugated_sign_matrix(ust: UstCode) -> SignMatrix:
    gens = ust.base_stabilizer.generators
    signs = np.ones((len(gens), ust.K), dtype=np.int8)
    for j, t in enumerate(ust.translations):
        for i, g in enumerate(gens):
            m = t.conjugate(g)
            if m == g:
                continue
            if m == -g:
                signs[i, j] = -1
            else:  # pragma: no cover - Pauli conjugation only ever flips sign
                raise InvalidCodeError(f"conjugating {g} by {t} gave non-real phase {m}")
    return SignMatrix(signs, gens)


def translation_commutant(
    base: Sequence[PauliOperator], translations: Sequence[PauliOperator], n: int
) -> list[PauliOperator]:
    """Generators of the subgroup of ``<base>`` commuting with every translation."""
    if not base:
        return []
    if not translations:
        return list(base)
    b = commutation_matrix(translations, base).bits  # (T, B)
    null = gf2_nullspace(BinMatrix(b))
    return [product((g for g, bit in zip(base, row) if bit), n) for row in null]
