"""Normal, canonical and neutral forms."""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Union

from pqa.dynamics.context import NeutralContext
from pqa.errors import UnboundCircuitVariableError
from pqa.syntax.names import free_circuit_vars, free_vars
from pqa.syntax.terms import (
    App,
    C,
    DownIntro,
    Family,
    Force,
    Gate,
    Lam,
    Match,
    Pair,
    Program,
    SuspCirc,
    SuspTerm,
    Unit,
    Var,
)


class FormClass(Enum):
    CANONICAL = "canonical"
    NEUTRAL = "neutral"
    NORMAL_MATCH = "normal match"
    REDUCIBLE = "reducible"

    @property
    def is_normal(self) -> bool:
        return self is not FormClass.REDUCIBLE


PiLike = Union[NeutralContext, Iterable[str]]


def classify(pi: PiLike, p: Program) -> FormClass:
    """Classify *p* given the neutral variables *pi*.

    Raises
    ------
    UnboundCircuitVariableError
        If *p* mentions a circuit variable outside *pi* or any free
        functional variable.
    """
    pi = NeutralContext.of(pi)
    _check_scope(pi, p)
    return _classify(pi, p)


def is_normal(pi: PiLike, p: Program) -> bool:
    return classify(pi, p).is_normal


def _classify(pi: NeutralContext, p: Program) -> FormClass:
    match p:
        case Var(name=n, color=color):
            if color is C and n in pi:
                return FormClass.NEUTRAL
            kind = "circuit" if color is C else "functional"
            raise UnboundCircuitVariableError(
                f"free {kind} variable {n} outside the neutral context"
            )
        case Gate():
            return FormClass.NEUTRAL
        case Unit() | SuspTerm() | SuspCirc():
            return FormClass.CANONICAL
        case Lam(color=color, binder=x, body=b):
            if color is not C or _classify(pi.extended(x), b).is_normal:
                return FormClass.CANONICAL
            return FormClass.REDUCIBLE
        case Pair(left=a, right=b):
            if _classify(pi, a).is_normal and _classify(pi, b).is_normal:
                return FormClass.CANONICAL
            return FormClass.REDUCIBLE
        case DownIntro(body=b):
            return FormClass.CANONICAL if _classify(pi, b).is_normal else FormClass.REDUCIBLE
        case App(fn=Gate(), arg=a, color=color) if color is C:
            arg = _classify(pi, a)
            if arg in (FormClass.NEUTRAL, FormClass.CANONICAL):
                return FormClass.NEUTRAL
            return FormClass.REDUCIBLE
        case Match(scrutinee=s, pattern=pat) if pat.family is not Family.FF:
            if _classify(pi, s) is not FormClass.NEUTRAL:
                return FormClass.REDUCIBLE
            if _classify(pi.extended(*pat.binders), pat.body).is_normal:
                return FormClass.NORMAL_MATCH
            return FormClass.REDUCIBLE
        case App() | Force() | Match():
            return FormClass.REDUCIBLE
    raise TypeError(f"not a program: {p!r}")


def _check_scope(pi: NeutralContext, p: Program) -> None:
    fv = free_vars(p)
    circuit = free_circuit_vars(p)
    for name in sorted(fv):
        if name not in circuit:
            raise UnboundCircuitVariableError(f"free functional variable {name}")
        if name not in pi:
            raise UnboundCircuitVariableError(
                f"free circuit variable {name} outside the neutral context"
            )
