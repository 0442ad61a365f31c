from __future__ import annotations


class CwsLabError(Exception):
    """Base class for all errors raised by cwslab."""


class LengthMismatchError(CwsLabError, ValueError):
    """Operands act on different numbers of qubits."""


class PauliParseError(CwsLabError, ValueError):
    pass


class BudgetExceededError(CwsLabError):
    """An enumeration or dense computation would exceed its configured budget."""


class NonCommutingError(CwsLabError, ValueError):
    pass


class GramSchmidtRankError(CwsLabError):
    """Targets are not independently detectable by the generator set."""


class InvalidCodeError(CwsLabError, ValueError):
    pass


class InconsistentCodeError(CwsLabError):
    """A constructed code basis failed its orthonormality check."""


class UncorrectableError(CwsLabError):
    """The input state violates the recovery precondition."""


class SpecFileError(CwsLabError, ValueError):
    """A code-spec JSON document is malformed."""
