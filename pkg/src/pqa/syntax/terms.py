"""Two-colored program syntax.

Functional terms and circuit terms share one tree.  Every node exposes a
``color``; constructors that exist in only one layer have a fixed color.
Source positions ride along in ``span`` and never take part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple, Union

from pqa.errors import Span
from pqa.syntax.types import TypeExpr


class Color(Enum):
    FUNCTIONAL = "functional"
    CIRCUIT = "circuit"


F = Color.FUNCTIONAL
C = Color.CIRCUIT


class Family(Enum):
    """Pattern family: scrutinee color followed by body color."""

    FF = "FF"
    QF = "QF"
    QQ = "QQ"

    @property
    def scrutinee_color(self) -> Color:
        return F if self is Family.FF else C

    @property
    def body_color(self) -> Color:
        return C if self is Family.QQ else F


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PUnit:
    body: "Program"
    family: Family

    @property
    def binders(self) -> Tuple[str, ...]:
        return ()


@dataclass(frozen=True)
class PPair:
    left: str
    right: str
    body: "Program"
    family: Family

    @property
    def binders(self) -> Tuple[str, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class PDown:
    name: str
    body: "Program"
    family: Family = Family.FF

    @property
    def binders(self) -> Tuple[str, ...]:
        return (self.name,)


Pattern = Union[PUnit, PPair, PDown]


def rebind(pat: Pattern, names: Tuple[str, ...], body: "Program") -> Pattern:
    """Same pattern shape with new binder names and body."""
    match pat:
        case PUnit():
            return replace(pat, body=body)
        case PPair():
            return replace(pat, left=names[0], right=names[1], body=body)
        case PDown():
            return replace(pat, name=names[0], body=body)
    raise TypeError(f"not a pattern: {pat!r}")


# ---------------------------------------------------------------------------
# Programs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    color: Color
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Program"
    color: Color
    annotation: Optional[TypeExpr] = None
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Unit:
    color: Color
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pair:
    left: "Program"
    right: "Program"
    color: Color
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SuspTerm:
    body: "Program"
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    @property
    def color(self) -> Color:
        return F


@dataclass(frozen=True)
class SuspCirc:
    body: "Program"
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    @property
    def color(self) -> Color:
        return F


@dataclass(frozen=True)
class DownIntro:
    body: "Program"
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    @property
    def color(self) -> Color:
        return F


@dataclass(frozen=True)
class App:
    fn: "Program"
    arg: "Program"
    color: Color
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Force:
    """``force M`` (functional) or ``force { M }`` (circuit); the inner term is functional."""

    inner: "Program"
    color: Color
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Match:
    scrutinee: "Program"
    pattern: Pattern
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    @property
    def family(self) -> Family:
        return self.pattern.family

    @property
    def scrutinee_color(self) -> Color:
        return self.pattern.family.scrutinee_color

    @property
    def body_color(self) -> Color:
        return self.pattern.family.body_color

    @property
    def color(self) -> Color:
        return self.body_color


@dataclass(frozen=True)
class Gate:
    name: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    @property
    def color(self) -> Color:
        return C


Program = Union[Var, Lam, Unit, Pair, SuspTerm, SuspCirc, DownIntro, App, Force, Match, Gate]


# ---------------------------------------------------------------------------
# Generic traversal
# ---------------------------------------------------------------------------


def children(p: Program) -> Tuple[Program, ...]:
    """Immediate subprograms in a fixed order (pattern bodies come last)."""
    match p:
        case Lam(body=b) | SuspTerm(body=b) | SuspCirc(body=b) | DownIntro(body=b):
            return (b,)
        case Pair(left=a, right=b):
            return (a, b)
        case App(fn=a, arg=b):
            return (a, b)
        case Force(inner=a):
            return (a,)
        case Match(scrutinee=s, pattern=pat):
            return (s, pat.body)
    return ()


def with_children(p: Program, kids: Tuple[Program, ...]) -> Program:
    match p:
        case Lam() | SuspTerm() | SuspCirc() | DownIntro():
            return replace(p, body=kids[0])
        case Pair():
            return replace(p, left=kids[0], right=kids[1])
        case App():
            return replace(p, fn=kids[0], arg=kids[1])
        case Force():
            return replace(p, inner=kids[0])
        case Match(pattern=pat):
            return replace(p, scrutinee=kids[0], pattern=replace(pat, body=kids[1]))
    return p


def size(p: Program) -> int:
    return 1 + sum(size(k) for k in children(p))


def subterm_at(p: Program, path: Tuple[int, ...]) -> Program:
    for index in path:
        p = children(p)[index]
    return p


def replace_at(p: Program, path: Tuple[int, ...], new: Program) -> Program:
    if not path:
        return new
    kids = list(children(p))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(p, tuple(kids))


def positions(p: Program, prefix: Tuple[int, ...] = ()):
    """Yield every path in *p*, pre-order."""
    yield prefix
    for index, kid in enumerate(children(p)):
        yield from positions(kid, prefix + (index,))
