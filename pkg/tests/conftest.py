from __future__ import annotations

from functools import reduce

import numpy as np
import pytest

from cwslab.graphs import ClassicalCode, CwsCode, Graph

_ONE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_PREFIX = {"": 1, "+": 1, "-": -1, "i": 1j, "+i": 1j, "-i": -1j}

RING5_K6_WORDS = ["00000", "01101", "10110", "01011", "10101", "11010"]


def kron_matrix(s: str) -> np.ndarray:
    """Textbook matrix of a Pauli string. Qubit 1 is the least significant index bit,
    so the Kronecker product runs from qubit n down to qubit 1."""
    body = s.lstrip("+-i")
    coeff = _PREFIX[s[: len(s) - len(body)]]
    return coeff * reduce(np.kron, [_ONE[c] for c in reversed(body)])


def random_pauli_string(rng, n: int) -> str:
    return "".join("IXYZ"[int(k)] for k in rng.integers(0, 4, size=n))


@pytest.fixture(scope="session")
def ring5():
    return Graph.ring(5)


@pytest.fixture(scope="session")
def code523(ring5):
    return CwsCode(ring5, ClassicalCode.from_strings(["00000", "11111"]), "ring5-K2")


@pytest.fixture(scope="session")
def code562(ring5):
    return CwsCode(ring5, ClassicalCode.from_strings(RING5_K6_WORDS), "ring5-K6")


@pytest.fixture(scope="session")
def ring3_trivial():
    return CwsCode(Graph.ring(3), ClassicalCode.from_strings(["000"]), "ring3")


_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
