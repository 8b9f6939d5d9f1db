"""Types, programs, names, parser and printer."""

from pqa.syntax.names import (
    FreshNames,
    alpha_eq,
    free_circuit_vars,
    free_vars,
    subst,
    substitute,
    tidy_names,
)
from pqa.syntax.parser import parse, parse_program, parse_signature, parse_type
from pqa.syntax.printer import print_program
from pqa.syntax.signature import Signature
from pqa.syntax.terms import (
    App,
    C,
    Color,
    DownIntro,
    F,
    Family,
    Force,
    Gate,
    Lam,
    Match,
    Pair,
    PDown,
    PPair,
    Program,
    PUnit,
    SuspCirc,
    SuspTerm,
    Unit,
    Var,
)
from pqa.syntax.types import (
    QUBIT,
    Arrow,
    Down,
    Mode,
    Qubit,
    Tensor,
    TypeExpr,
    UnitAt,
    Up,
    check_type,
    down,
    is_simple,
    mode_geq,
    mode_of,
    print_type,
    up,
)

__all__ = [
    "App",
    "Arrow",
    "C",
    "Color",
    "Down",
    "DownIntro",
    "F",
    "Family",
    "Force",
    "FreshNames",
    "Gate",
    "Lam",
    "Match",
    "Mode",
    "PDown",
    "PPair",
    "PUnit",
    "Pair",
    "Program",
    "QUBIT",
    "Qubit",
    "Signature",
    "SuspCirc",
    "SuspTerm",
    "Tensor",
    "TypeExpr",
    "Unit",
    "UnitAt",
    "Up",
    "Var",
    "alpha_eq",
    "check_type",
    "down",
    "free_circuit_vars",
    "free_vars",
    "is_simple",
    "mode_geq",
    "mode_of",
    "parse",
    "parse_program",
    "parse_signature",
    "parse_type",
    "print_program",
    "print_type",
    "subst",
    "substitute",
    "tidy_names",
    "up",
]
