"""Error hierarchy shared by every stage of the toolchain.

Each error carries a stable diagnostic code and, when the offending node
came from source text, a :class:`Span`.  The CLI renders them as
``FILE:LINE:COL: error[CODE]: message``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Span:
    """1-based source position of a parsed node."""

    line: int
    column: int


class PqaError(Exception):
    """Base class for all pqa errors."""

    code = "E000"

    def __init__(self, message: str, span: Optional[Span] = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span

    def diagnostic(self, filename: str = "<input>") -> str:
        line, column = (self.span.line, self.span.column) if self.span else (1, 1)
        return f"{filename}:{line}:{column}: error[{self.code}]: {self.message}"


# ---------------------------------------------------------------------------
# Front end
# ---------------------------------------------------------------------------


class ParseError(PqaError):
    code = "E001"


class ColorError(PqaError):
    code = "E002"


class SignatureError(PqaError):
    code = "E003"


# ---------------------------------------------------------------------------
# Statics
# ---------------------------------------------------------------------------


class TypingError(PqaError):
    """Base class for errors raised by the type checkers."""


class LinearUnusedError(TypingError):
    code = "E101"


class LinearReuseError(TypingError):
    code = "E102"


class IndependenceError(TypingError):
    code = "E103"


class UnknownGateError(TypingError):
    code = "E104"


class NonSimpleQuantumError(TypingError):
    code = "E105"


class ModeMismatchError(TypingError):
    code = "E106"


class UnboundVariableError(TypingError):
    code = "E107"


class TypeMismatchError(TypingError):
    code = "E108"


class MissingAnnotationError(TypingError):
    code = "E109"


class PatternFamilyError(TypingError):
    code = "E110"


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------


class DynamicsError(PqaError):
    """Base class for errors raised while classifying or reducing."""


class StuckError(DynamicsError):
    code = "E201"


class UnboundCircuitVariableError(DynamicsError):
    code = "E107"


class EliminationError(DynamicsError):
    code = "E202"


class NeutralSubstError(DynamicsError):
    code = "E203"


class DeterminismError(DynamicsError):
    code = "E204"


# ---------------------------------------------------------------------------
# Circuits and harness
# ---------------------------------------------------------------------------


class CircuitError(PqaError):
    code = "E301"


class GenerationError(PqaError):
    code = "E401"


class OracleLimitError(PqaError):
    code = "E402"
