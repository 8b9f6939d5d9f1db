"""Classification, reduction and normalization."""

from pqa.dynamics.classify import FormClass, classify, is_normal
from pqa.dynamics.context import NeutralContext, TypedNeutralContext, cneu, ctp
from pqa.dynamics.neutral import apply_neutral_subst, check_neutral_subst
from pqa.dynamics.normalize import (
    FuelExhausted,
    Normal,
    StepTrace,
    Stuck,
    halts,
    normalize,
)
from pqa.dynamics.reduce import RULE_NAMES, Reduct, eliminate_canonical, step

__all__ = [
    "FormClass",
    "FuelExhausted",
    "NeutralContext",
    "Normal",
    "RULE_NAMES",
    "Reduct",
    "StepTrace",
    "Stuck",
    "TypedNeutralContext",
    "apply_neutral_subst",
    "check_neutral_subst",
    "classify",
    "cneu",
    "ctp",
    "eliminate_canonical",
    "halts",
    "is_normal",
    "normalize",
    "step",
]
