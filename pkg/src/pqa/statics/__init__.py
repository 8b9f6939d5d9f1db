"""Linear and structural type checking."""

from pqa.statics.checker import (
    CheckReport,
    Judgement,
    check_pattern_pqa,
    check_pqa,
    check_pqx,
)
from pqa.statics.context import TypingContext, geq_mode

__all__ = [
    "CheckReport",
    "Judgement",
    "TypingContext",
    "check_pattern_pqa",
    "check_pqa",
    "check_pqx",
    "geq_mode",
]
