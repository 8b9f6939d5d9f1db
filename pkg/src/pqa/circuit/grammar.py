"""Shape of well-typed normal forms.

A normal program of a given type is generated by a small grammar that
depends only on the type: mode-u values are closed canonical forms, and
linear values are canonical or neutral forms wrapped in matches on
neutral circuits.  :func:`check_normal_grammar` decides membership and
reports the clause that matched, or the path of the first node that fits
no clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from pqa.dynamics.classify import FormClass, classify
from pqa.dynamics.context import TypedNeutralContext, cneu
from pqa.encoding.stdlib import stdlib_signature
from pqa.errors import CircuitError, PqaError
from pqa.syntax.names import free_circuit_vars
from pqa.syntax.printer import print_program
from pqa.syntax.signature import Signature
from pqa.syntax.terms import (
    App,
    C,
    DownIntro,
    F,
    Family,
    Gate,
    Lam,
    Match,
    Pair,
    PPair,
    Program,
    PUnit,
    SuspCirc,
    SuspTerm,
    Unit,
    Var,
)
from pqa.syntax.types import (
    Arrow,
    Down,
    Mode,
    Qubit,
    Tensor,
    TypeExpr,
    UnitAt,
    Up,
    mode_of,
    print_type,
)

Path = Tuple[int, ...]


@dataclass(frozen=True)
class NormalFormReport:
    conforms: bool
    grammar_case: Optional[str] = None
    path: Path = ()
    error: Optional[PqaError] = None

    def describe(self) -> str:
        if self.conforms:
            return f"normal form ({self.grammar_case})"
        where = ".".join(str(i) for i in self.path) or "root"
        return f"not a normal form at {where}: {self.error.message if self.error else '?'}"


class _GrammarMismatch(CircuitError):
    def __init__(self, message: str, path: Path) -> None:
        super().__init__(message)
        self.path = path


def _extend(
    psi: TypedNeutralContext, pairs: Iterable[Tuple[str, TypeExpr]]
) -> TypedNeutralContext:
    new = dict(pairs)
    kept = tuple((n, t) for n, t in psi if n not in new)
    return TypedNeutralContext(kept + tuple(new.items()))


def _without(psi: TypedNeutralContext, names: Iterable[str]) -> TypedNeutralContext:
    drop = set(names)
    return TypedNeutralContext(tuple((n, t) for n, t in psi if n not in drop))


class _Grammar:
    def __init__(self, sig: Signature) -> None:
        self.sig = sig

    # -- neutral terms -----------------------------------------------------

    def neutral_type(self, psi: TypedNeutralContext, r: Program, path: Path) -> TypeExpr:
        """Type of a neutral circuit; raises unless *r* is neutral under Ψ."""
        if classify(cneu(psi), r) is not FormClass.NEUTRAL:
            raise _GrammarMismatch(f"expected a neutral circuit, got {print_program(r)}", path)
        match r:
            case Var(name=n):
                return dict(psi.bindings)[n]
            case Gate(name=g):
                return self._gate(g, path)
            case App(fn=Gate(name=g)):
                return self._gate(g, path).cod
        raise _GrammarMismatch(f"not a neutral circuit: {print_program(r)}", path)

    def _gate(self, name: str, path: Path) -> Arrow:
        ty = self.sig.get(name)
        if ty is None:
            raise _GrammarMismatch(f"unknown gate #{name}", path)
        return ty

    # -- values ------------------------------------------------------------

    def value(self, ty: TypeExpr, psi: TypedNeutralContext, v: Program, path: Path) -> str:
        if mode_of(ty) is Mode.U or isinstance(ty, Down):
            return self._closed(ty, psi, v, path)
        if _circuit_type(ty):
            return self._circuit(ty, psi, v, path)
        return self._linear(ty, psi, v, path)

    def _closed(self, ty: TypeExpr, psi: TypedNeutralContext, v: Program, path: Path) -> str:
        if len(psi):
            names = ", ".join(n for n, _ in psi)
            raise _GrammarMismatch(
                f"value at {print_type(ty)} under a nonempty neutral context ({names})", path
            )
        match ty, v:
            case UnitAt(), Unit(color=color) if color is F:
                return "unit"
            case Tensor(left=a, right=b), Pair(left=left, right=right, color=color) if color is F:
                self.value(a, psi, left, path + (0,))
                self.value(b, psi, right, path + (1,))
                return "pair"
            case Arrow(), Lam(color=color) if color is F:
                return "lam"
            case Up(), SuspTerm():
                return "susp"
            case Down(inner=a), DownIntro(body=body):
                self.value(a, psi, body, path + (0,))
                return "down"
        raise _GrammarMismatch(f"no clause at {print_type(ty)} for {print_program(v)}", path)

    def _linear(self, ty: TypeExpr, psi: TypedNeutralContext, v: Program, path: Path) -> str:
        match ty, v:
            case UnitAt(), Unit(color=color) if color is F:
                return "unit"
            case Tensor(left=a, right=b), Pair(left=left, right=right, color=color) if color is F:
                self._split(a, b, psi, left, right, path)
                return "pair"
            case Arrow(), Lam(color=color) if color is F:
                return "lam"
            case Up(), SuspCirc():
                return "circ"
            case _, Match(pattern=pat) if pat.family is Family.QF:
                self._match(ty, psi, v, path)
                return "match"
        raise _GrammarMismatch(f"no clause at {print_type(ty)} for {print_program(v)}", path)

    def _circuit(self, ty: TypeExpr, psi: TypedNeutralContext, v: Program, path: Path) -> str:
        match ty, v:
            case _, Match(pattern=pat) if pat.family is Family.QQ:
                self._match(ty, psi, v, path)
                return "match"
            case UnitAt(), Unit(color=color) if color is C:
                return "unit"
            case Tensor(left=a, right=b), Pair(left=left, right=right, color=color) if color is C:
                self._split(a, b, psi, left, right, path)
                return "pair"
            case Arrow(dom=a, cod=b), Lam(binder=x, body=body, color=color) if color is C:
                self.value(b, _extend(psi, [(x, a)]), body, path + (0,))
                return "lam"
            case Arrow(), Gate(name=g):
                if self._gate(g, path) != ty:
                    raise _GrammarMismatch(f"gate #{g} is not at {print_type(ty)}", path)
                return "gate"
            case UnitAt() | Qubit() | Tensor(), _:
                found = self.neutral_type(psi, v, path)
                if found != ty:
                    raise _GrammarMismatch(
                        f"neutral circuit of type {print_type(found)} where "
                        f"{print_type(ty)} was expected",
                        path,
                    )
                return "neutral"
        raise _GrammarMismatch(f"no clause at {print_type(ty)} for {print_program(v)}", path)

    def _split(
        self,
        a: TypeExpr,
        b: TypeExpr,
        psi: TypedNeutralContext,
        left: Program,
        right: Program,
        path: Path,
    ) -> None:
        self.value(a, psi.restricted(free_circuit_vars(left)), left, path + (0,))
        self.value(b, psi.restricted(free_circuit_vars(right)), right, path + (1,))

    def _match(self, ty: TypeExpr, psi: TypedNeutralContext, v: Match, path: Path) -> None:
        r, pat = v.scrutinee, v.pattern
        found = self.neutral_type(psi, r, path + (0,))
        rest = _without(psi, free_circuit_vars(r))
        match pat, found:
            case PUnit(), UnitAt(mode=Mode.Q):
                inner = rest
            case PPair(left=x, right=y), Tensor(left=a, right=b, mode=Mode.Q):
                inner = _extend(rest, [(x, a), (y, b)])
            case _:
                raise _GrammarMismatch(
                    f"pattern does not fit a neutral circuit of type {print_type(found)}",
                    path,
                )
        self.value(ty, inner, pat.body, path + (1,))


def _circuit_type(ty: TypeExpr) -> bool:
    match ty:
        case Qubit():
            return True
        case UnitAt(mode=m) | Tensor(mode=m) | Arrow(mode=m):
            return m is Mode.Q
    return False


def check_normal_grammar(
    ty: TypeExpr,
    psi: TypedNeutralContext,
    v: Program,
    sig: Optional[Signature] = None,
) -> NormalFormReport:
    """Decide whether the normal program *v* has the shape its type demands.

    *psi* types the circuit variables *v* may mention.  Programs that are
    not normal under ``cneu(psi)`` are reported as non-conforming.
    """
    grammar = _Grammar(sig if sig is not None else stdlib_signature())
    try:
        if not classify(cneu(psi), v).is_normal:
            raise _GrammarMismatch(f"not normal: {print_program(v)}", ())
        case = grammar.value(ty, psi, v, ())
    except _GrammarMismatch as exc:
        return NormalFormReport(False, path=exc.path, error=exc)
    except PqaError as exc:
        return NormalFormReport(False, error=exc)
    return NormalFormReport(True, grammar_case=case)
