"""Single-line pretty printer whose output the parser reads back."""

from __future__ import annotations

from pqa.syntax.names import tidy_names
from pqa.syntax.terms import (
    App,
    C,
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
from pqa.syntax.types import print_type

# Precedence levels: binders/matches < application < prefix operators < atoms.
_LOW, _APP, _PREFIX, _ATOM = 0, 1, 2, 3


def print_program(p: Program, *, annotations: bool = True) -> str:
    return _Printer(annotations).show(tidy_names(p), _LOW)


class _Printer:
    def __init__(self, annotations: bool) -> None:
        self.annotations = annotations

    def show(self, p: Program, need: int) -> str:
        text, level = self._render(p)
        return f"({text})" if level < need else text

    def _binder(self, p: Lam) -> str:
        if self.annotations and p.annotation is not None:
            return f"({p.binder} : {print_type(p.annotation)})"
        return p.binder

    def _pattern(self, pat) -> str:
        body = self.show(pat.body, _LOW)
        match pat:
            case PUnit():
                return f"() => {body}"
            case PPair(left=x, right=y):
                return f"({x}, {y}) => {body}"
            case PDown(name=x):
                return f"down {x} => {body}"
        raise TypeError(f"not a pattern: {pat!r}")

    def _render(self, p: Program):
        match p:
            case Var(name=n):
                return n, _ATOM
            case Unit():
                return "()", _ATOM
            case Gate(name=n):
                return f"#{n}", _ATOM
            case Pair(left=a, right=b):
                return f"({self.show(a, _LOW)}, {self.show(b, _LOW)})", _ATOM
            case SuspCirc(body=b):
                return f"circ {{ {self.show(b, _LOW)} }}", _ATOM
            case Force(inner=m, color=color) if color is C:
                return f"force {{ {self.show(m, _LOW)} }}", _ATOM
            case Force(inner=m):
                return f"force {self.show(m, _PREFIX)}", _PREFIX
            case SuspTerm(body=b):
                return f"susp {self.show(b, _PREFIX)}", _PREFIX
            case DownIntro(body=b):
                return f"down {self.show(b, _PREFIX)}", _PREFIX
            case App(fn=f, arg=a):
                return f"{self.show(f, _APP)} {self.show(a, _ATOM)}", _APP
            case Lam(color=color, body=b):
                keyword = "fn" if color is F else "lam"
                return f"{keyword} {self._binder(p)} => {self.show(b, _LOW)}", _LOW
            case Match(scrutinee=s, pattern=pat):
                keyword = "match circval" if pat.family is Family.QF else "match"
                return f"{keyword} {self.show(s, _LOW)} with {{ {self._pattern(pat)} }}", _LOW
        raise TypeError(f"not a program: {p!r}")
