"""JSON code-spec documents.

A spec names a graph by its edge list (1-based vertices) and a classical
code by bit strings whose leftmost character is qubit 1. Optional fields
carry a stabilizer presentation for additive codes, declared recovery
parameters, and golden values used by ``cwslab verify``.

Bundled fixtures can be referred to by name (``ring3``, ``ring5-K2``,
``ring5-K6``) instead of a path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .exceptions import CwsLabError, SpecFileError
from .graphs import ClassicalCode, CwsCode, Graph
from .pauli import PauliOperator

KNOWN_FIELDS = {
    "name",
    "description",
    "n",
    "edges",
    "codewords",
    "stabilizer_generators",
    "logical_operators",
    "error_representatives",
    "declared_t",
    "index_sets",
    "expected",
}


@dataclass(frozen=True)
class CodeSpec:
    name: str
    n: int
    code: CwsCode
    stabilizer_generators: tuple[PauliOperator, ...] = ()
    logical_x: tuple[PauliOperator, ...] = ()
    logical_z: tuple[PauliOperator, ...] = ()
    error_representatives: tuple[PauliOperator, ...] = ()
    declared_t: int | None = None
    index_sets: tuple[tuple[int, ...], ...] | None = None
    expected: dict = field(default_factory=dict)
    source: str = ""

    @property
    def graph(self) -> Graph:
        return self.code.graph


def bundled_names() -> list[str]:
    root = resources.files("cwslab") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json") and ".report" not in p.name)


def _bundled_path(name: str):
    key = name.lower().replace("-", "_")
    if key.endswith(".json"):
        key = key[:-5]
    root = resources.files("cwslab") / "fixtures"
    cand = root / f"{key}.json"
    return cand if cand.is_file() else None


def resolve(ref: str | Path) -> tuple[str, str]:
    """Return ``(text, source label)`` for a path or bundled fixture name."""
    p = Path(ref)
    if p.is_file():
        return p.read_text(), str(p)
    b = _bundled_path(str(ref))
    if b is not None:
        return b.read_text(), f"bundled:{b.name}"
    raise SpecFileError(f"no spec file or bundled fixture named {str(ref)!r} (bundled: {', '.join(bundled_names())})")


def _fail(where: str, msg: str):
    raise SpecFileError(f"field {where}: {msg}")


def _pauli(s: Any, n: int, where: str) -> PauliOperator:
    if not isinstance(s, str):
        _fail(where, f"expected a Pauli string, got {type(s).__name__}")
    try:
        p = PauliOperator.from_string(s, n)
    except CwsLabError as exc:
        _fail(where, str(exc))
    except ValueError as exc:
        _fail(where, str(exc))
    return p


def _int(v: Any, where: str, lo: int = 0) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(where, f"expected an integer, got {v!r}")
    if v < lo:
        _fail(where, f"must be >= {lo}, got {v}")
    return v


def parse_spec(doc: dict, source: str = "<memory>") -> CodeSpec:
    if not isinstance(doc, dict):
        raise SpecFileError("spec must be a JSON object")
    unknown = sorted(set(doc) - KNOWN_FIELDS)
    if unknown:
        _fail(unknown[0], f"unknown field (known: {', '.join(sorted(KNOWN_FIELDS))})")
    for req in ("name", "n", "edges", "codewords"):
        if req not in doc:
            _fail(req, "missing required field")
    name = doc["name"]
    if not isinstance(name, str) or not name:
        _fail("name", "expected a non-empty string")
    n = _int(doc["n"], "n", lo=1)

    edges = doc["edges"]
    if not isinstance(edges, list):
        _fail("edges", "expected a list of vertex pairs")
    pairs = []
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2):
            _fail(f"edges[{i}]", f"expected a pair [i, j], got {e!r}")
        pairs.append((_int(e[0], f"edges[{i}][0]", 1), _int(e[1], f"edges[{i}][1]", 1)))
    try:
        graph = Graph.from_edges(n, pairs)
    except CwsLabError as exc:
        _fail("edges", str(exc))

    words = doc["codewords"]
    if not isinstance(words, list) or not words:
        _fail("codewords", "expected a non-empty list of bit strings")
    for i, w in enumerate(words):
        if not isinstance(w, str) or len(w) != n or set(w) - {"0", "1"}:
            _fail(f"codewords[{i}]", f"expected a {n}-character bit string, got {w!r}")
    if len(set(words)) != len(words):
        _fail("codewords", "codewords are not distinct")
    code = CwsCode(graph, ClassicalCode.from_strings(words), name)

    gens = tuple(
        _pauli(s, n, f"stabilizer_generators[{i}]") for i, s in enumerate(doc.get("stabilizer_generators", []))
    )
    lx: tuple[PauliOperator, ...] = ()
    lz: tuple[PauliOperator, ...] = ()
    if "logical_operators" in doc:
        lo = doc["logical_operators"]
        if not isinstance(lo, dict) or set(lo) - {"X", "Z"}:
            _fail("logical_operators", 'expected {"X": [...], "Z": [...]}')
        lx = tuple(_pauli(s, n, f"logical_operators.X[{i}]") for i, s in enumerate(lo.get("X", [])))
        lz = tuple(_pauli(s, n, f"logical_operators.Z[{i}]") for i, s in enumerate(lo.get("Z", [])))
        if len(lx) != len(lz):
            _fail("logical_operators", "X and Z lists differ in length")
    reps = tuple(
        _pauli(s, n, f"error_representatives[{i}]") for i, s in enumerate(doc.get("error_representatives", []))
    )
    t = doc.get("declared_t")
    if t is not None:
        t = _int(t, "declared_t")
        if t > n:
            _fail("declared_t", f"exceeds n={n}")
    sets = doc.get("index_sets")
    if sets is not None:
        if not isinstance(sets, list) or not sets:
            _fail("index_sets", "expected a non-empty list of qubit lists")
        out = []
        for i, s in enumerate(sets):
            if not isinstance(s, list):
                _fail(f"index_sets[{i}]", "expected a list of qubits")
            qs = tuple(_int(q, f"index_sets[{i}]", 1) for q in s)
            if any(q > n for q in qs) or len(set(qs)) != len(qs):
                _fail(f"index_sets[{i}]", f"qubits must be distinct and in 1..{n}")
            out.append(qs)
        sets = tuple(out)
    expected = doc.get("expected", {})
    if not isinstance(expected, dict):
        _fail("expected", "expected an object")
    return CodeSpec(name, n, code, gens, lx, lz, reps, t, sets, expected, source)


def load_spec(ref: str | Path) -> CodeSpec:
    text, source = resolve(ref)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_spec(doc, source)
