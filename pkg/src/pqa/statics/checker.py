"""Type checkers for the linear system and its structural approximation.

The linear checker reads the declarative context-splitting rules
algorithmically: every subterm sees the whole context and reports which
linear bindings it consumed, and the parent checks that sibling
consumptions are disjoint.  The structural checker runs the same
traversal with consumption tracking and every mode side-condition
switched off, so contexts are preserved and weakening and contraction
are free at every mode.

Checking is bidirectional.  An ``expected`` type flows down through
binders, pairs, shifts and match bodies; elsewhere types are
synthesized.  The mode of a bare functional ``()`` is taken from the
expected type when there is one and defaults to ``l`` otherwise.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from pqa.errors import (
    IndependenceError,
    LinearReuseError,
    LinearUnusedError,
    MissingAnnotationError,
    ModeMismatchError,
    NonSimpleQuantumError,
    PatternFamilyError,
    PqaError,
    TypeMismatchError,
    TypingError,
    UnboundVariableError,
    UnknownGateError,
)
from pqa.statics.context import TypingContext
from pqa.syntax.signature import Signature
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
    Pattern,
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
    Tensor,
    TypeExpr,
    UnitAt,
    Up,
    check_type,
    is_linear,
    is_simple,
    mode_geq,
    mode_of,
    print_type,
)

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class Judgement:
    """One checked node: its result mode and the modes of what it consumed."""

    path: Path
    mode: Mode
    consumed_modes: Tuple[Mode, ...]

    @property
    def independent(self) -> bool:
        return all(mode_geq(m, self.mode) for m in self.consumed_modes)


@dataclass
class CheckReport:
    """Verdict of a checker run."""

    type: Optional[TypeExpr] = None
    error: Optional[PqaError] = None
    consumed: FrozenSet[str] = frozenset()
    judgements: List[Judgement] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None

    def independence_violations(self) -> List[Judgement]:
        return [j for j in self.judgements if not j.independent]

    def describe(self) -> str:
        if self.error is not None:
            return f"error[{self.error.code}]: {self.error.message}"
        return f"TYPE: {print_type(self.type)}"


# ---------------------------------------------------------------------------
# Checker
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Entry:
    key: int
    name: str
    type: TypeExpr


Env = Dict[str, _Entry]
Used = FrozenSet[int]

_EMPTY: Used = frozenset()


def _contains_functional_unit(p: Program) -> bool:
    if isinstance(p, Unit) and p.color is F:
        return True
    if isinstance(p, (Pair, Match)):
        kids = (p.left, p.right) if isinstance(p, Pair) else (p.scrutinee, p.pattern.body)
        return any(_contains_functional_unit(k) for k in kids)
    return False


def _is_mode_flexible(p: Program) -> bool:
    """Functional ``()`` trees whose mode only the context can decide."""
    match p:
        case Unit(color=color):
            return color is F
        case Pair(left=a, right=b, color=color):
            return color is F and _is_mode_flexible(a) and _is_mode_flexible(b)
    return False


class _Checker:
    def __init__(self, sig: Signature, *, linear: bool, audit: bool = False) -> None:
        self.sig = sig
        self.linear = linear
        self.audit = audit
        self.judgements: List[Judgement] = []
        self._keys = itertools.count()
        self._entries: Dict[int, _Entry] = {}

    # -- environment ----------------------------------------------------------

    def bind(self, env: Env, name: str, ty: TypeExpr) -> Tuple[Env, _Entry]:
        entry = _Entry(next(self._keys), name, ty)
        self._entries[entry.key] = entry
        return {**env, name: entry}, entry

    def initial_env(self, ctx: TypingContext) -> Tuple[Env, List[_Entry]]:
        env: Env = {}
        entries = []
        for name, ty in ctx:
            self._well_formed(ty)
            if mode_of(ty) == Mode.Q and not is_simple(ty):
                raise NonSimpleQuantumError(
                    f"circuit variable {name} has non-simple type {print_type(ty)}"
                )
            env, entry = self.bind(env, name, ty)
            entries.append(entry)
        return env, entries

    def _well_formed(self, ty: TypeExpr) -> None:
        check_type(ty)

    def _consumes(self, entry: _Entry) -> Used:
        if self.linear and is_linear(entry.type):
            return frozenset({entry.key})
        return _EMPTY

    def _join(self, a: Used, b: Used) -> Used:
        if self.linear:
            clash = a & b
            if clash:
                name = self._entries[min(clash)].name
                raise LinearReuseError(f"linear variable {name} used twice")
        return a | b

    def _require_used(self, entry: _Entry, used: Used) -> None:
        if self.linear and is_linear(entry.type) and entry.key not in used:
            raise LinearUnusedError(f"linear variable {entry.name} is never used")

    def _require_geq(self, used: Used, k: Mode, what: str) -> None:
        if not self.linear:
            return
        for key in sorted(used):
            entry = self._entries[key]
            if not mode_geq(mode_of(entry.type), k):
                raise IndependenceError(
                    f"{what} at mode {k} cannot use {entry.name} : {print_type(entry.type)}"
                )

    # -- entry point --------------------------------------------------------------

    def check(
        self,
        p: Program,
        env: Env,
        want: Optional[TypeExpr] = None,
        hint: Optional[Mode] = None,
        path: Path = (),
    ) -> Tuple[TypeExpr, Used]:
        if want is not None:
            hint = mode_of(want)
        try:
            ty, used = self._synth(p, env, want, hint, path)
            if want is not None and ty != want:
                raise TypeMismatchError(
                    f"expected {print_type(want)}, found {print_type(ty)}"
                )
        except TypingError as exc:
            if exc.span is None:
                exc.span = p.span
            raise
        if self.audit:
            modes = tuple(mode_of(self._entries[k].type) for k in sorted(used))
            self.judgements.append(Judgement(path, mode_of(ty), modes))
        return ty, used

    # -- per-construct rules ----------------------------------------------------

    def _synth(self, p, env, want, hint, path):
        match p:
            case Var():
                return self._var(p, env)
            case Lam():
                return self._lam(p, env, want, path)
            case Unit(color=color):
                if color is C:
                    return UnitAt(Mode.Q), _EMPTY
                mode = hint if hint in (Mode.U, Mode.L) else Mode.L
                return UnitAt(mode), _EMPTY
            case Pair():
                return self._pair(p, env, want, hint, path)
            case SuspTerm(body=m):
                inner_want = want.inner if isinstance(want, Up) and want.lower == Mode.L else None
                a, used = self.check(m, env, inner_want, Mode.L, path + (0,))
                if mode_of(a) != Mode.L:
                    raise ModeMismatchError(f"susp suspends mode-l terms, got {print_type(a)}")
                self._require_geq(used, Mode.U, "susp")
                return Up(a, Mode.L, Mode.U), used
            case SuspCirc(body=c):
                inner_want = want.inner if isinstance(want, Up) and want.lower == Mode.Q else None
                a, used = self.check(c, env, inner_want, Mode.Q, path + (0,))
                self._require_geq(used, Mode.L, "circ")
                return Up(a, Mode.Q, Mode.L), used
            case DownIntro(body=m):
                inner_want = want.inner if isinstance(want, Down) else None
                a, used = self.check(m, env, inner_want, Mode.U, path + (0,))
                if mode_of(a) != Mode.U:
                    raise ModeMismatchError(f"down expects a mode-u term, got {print_type(a)}")
                self._require_geq(used, Mode.U, "down")
                return Down(a), used
            case App():
                return self._app(p, env, path)
            case Force(inner=m, color=color):
                return self._force(m, color, env, path)
            case Gate(name=name):
                ty = self.sig.get(name)
                if ty is None:
                    raise UnknownGateError(f"unknown gate {name}")
                return ty, _EMPTY
            case Match():
                return self._match(p, env, want, hint, path)
        raise TypeError(f"not a program: {p!r}")

    def _var(self, p: Var, env: Env):
        entry = env.get(p.name)
        if entry is None:
            raise UnboundVariableError(f"unbound variable {p.name}")
        mode = mode_of(entry.type)
        if p.color is F and mode == Mode.Q:
            raise ModeMismatchError(
                f"circuit variable {p.name} used as a functional term; "
                f"wrap it as circ {{ {p.name} }}"
            )
        if p.color is C and mode != Mode.Q:
            raise ModeMismatchError(
                f"functional variable {p.name} used inside a circuit; use force {{ {p.name} }}"
            )
        if p.color is C and not is_simple(entry.type):
            raise NonSimpleQuantumError(
                f"circuit variable {p.name} has non-simple type {print_type(entry.type)}"
            )
        return entry.type, self._consumes(entry)

    def _lam(self, p: Lam, env: Env, want, path):
        a = p.annotation
        if a is None:
            keyword = "fn" if p.color is F else "lam"
            raise MissingAnnotationError(
                f"{keyword} {p.binder} needs a type annotation: {keyword} ({p.binder} : A) => ..."
            )
        self._well_formed(a)
        mode = mode_of(a)
        if p.color is F and mode == Mode.Q:
            raise ModeMismatchError(f"fn binds functional types; {print_type(a)} needs lam")
        if p.color is C and not is_simple(a):
            raise NonSimpleQuantumError(
                f"circuit variable {p.binder} bound at non-simple type {print_type(a)}"
            )
        body_want = None
        if isinstance(want, Arrow):
            if want.dom != a:
                raise TypeMismatchError(
                    f"expected a function from {print_type(want.dom)}, binder has {print_type(a)}"
                )
            body_want = want.cod
        inner, entry = self.bind(env, p.binder, a)
        b, used = self.check(p.body, inner, body_want, mode, path + (0,))
        if p.color is C:
            if not is_simple(b):
                raise TypeMismatchError(
                    f"circuit functions return simple types, got {print_type(b)}"
                )
            result = Arrow(a, b, Mode.Q)
        else:
            if mode_of(b) != mode:
                raise ModeMismatchError(
                    f"function body at mode {mode_of(b)} under a mode-{mode} binder"
                )
            result = Arrow(a, b, mode)
        self._require_used(entry, used)
        return result, used - {entry.key}

    def _pair(self, p: Pair, env: Env, want, hint, path):
        color = p.color
        if isinstance(want, Tensor):
            lt, lu = self.check(p.left, env, want.left, None, path + (0,))
            rt, ru = self.check(p.right, env, want.right, None, path + (1,))
        elif color is C:
            lt, lu = self.check(p.left, env, None, Mode.Q, path + (0,))
            rt, ru = self.check(p.right, env, None, Mode.Q, path + (1,))
        elif _is_mode_flexible(p.left) and not _is_mode_flexible(p.right):
            rt, ru = self.check(p.right, env, None, hint, path + (1,))
            lt, lu = self.check(p.left, env, None, mode_of(rt), path + (0,))
        else:
            lt, lu = self.check(p.left, env, None, hint, path + (0,))
            rt, ru = self.check(p.right, env, None, mode_of(lt), path + (1,))
        used = self._join(lu, ru)
        if color is C:
            if not (is_simple(lt) and is_simple(rt)):
                raise TypeMismatchError(
                    f"circuit pairs combine simple types, got {print_type(lt)} and {print_type(rt)}"
                )
            return Tensor(lt, rt, Mode.Q), used
        if mode_of(lt) != mode_of(rt):
            raise ModeMismatchError(
                f"pair components at different modes: {print_type(lt)} and {print_type(rt)}"
            )
        return Tensor(lt, rt, mode_of(lt)), used

    def _app(self, p: App, env: Env, path):
        ft, fu = self.check(p.fn, env, None, None if p.color is F else Mode.Q, path + (0,))
        if not isinstance(ft, Arrow):
            raise TypeMismatchError(f"applying a term of non-function type {print_type(ft)}")
        if p.color is F and ft.mode == Mode.Q:
            raise ModeMismatchError("a circuit function is applied inside a circuit, not a term")
        if p.color is C and ft.mode != Mode.Q:
            raise ModeMismatchError(f"circuit application of a mode-{ft.mode} function")
        _, au = self.check(p.arg, env, ft.dom, None, path + (1,))
        return ft.cod, self._join(fu, au)

    def _force(self, m: Program, color, env: Env, path):
        hint = Mode.U if color is F else Mode.L
        t, used = self.check(m, env, None, hint, path + (0,))
        if not isinstance(t, Up):
            raise TypeMismatchError(f"force expects a suspension, got {print_type(t)}")
        if color is F and t.lower != Mode.L:
            raise ModeMismatchError("a suspended circuit is forced with force { ... } in a circuit")
        if color is C and t.lower != Mode.Q:
            raise ModeMismatchError("force { ... } in a circuit expects a suspended circuit")
        return t.inner, used

    # -- matches and patterns ---------------------------------------------------

    def _match(self, p: Match, env: Env, want, hint, path):
        family = p.family
        if family is not Family.FF:
            st, su = self.check(p.scrutinee, env, None, Mode.Q, path + (0,))
            bt, bu = self.pattern(p.pattern, st, env, want, hint, path + (1,))
            return bt, self._join(su, bu)

        attempts: List[Optional[Mode]] = [hint]
        if hint != Mode.U and _contains_functional_unit(p.scrutinee):
            attempts.append(Mode.U)
        first_error: Optional[TypingError] = None
        for scrutinee_hint in attempts:
            mark = len(self.judgements)
            try:
                st, su = self.check(p.scrutinee, env, None, scrutinee_hint, path + (0,))
                bt, bu = self.pattern(p.pattern, st, env, want, hint, path + (1,))
                return bt, self._join(su, bu)
            except TypingError as exc:
                del self.judgements[mark:]
                first_error = first_error or exc
        raise first_error

    def pattern(
        self,
        pat: Pattern,
        scrutinee_type: TypeExpr,
        env: Env,
        want: Optional[TypeExpr] = None,
        hint: Optional[Mode] = None,
        path: Path = (),
    ) -> Tuple[TypeExpr, Used]:
        family = pat.family
        body_hint = hint if family.body_color is F else Mode.Q
        scrutinee_mode = mode_of(scrutinee_type)
        if family.scrutinee_color is C and scrutinee_mode != Mode.Q:
            raise PatternFamilyError(
                f"circuit pattern applied to a functional type {print_type(scrutinee_type)}"
            )
        if family.scrutinee_color is F and scrutinee_mode == Mode.Q:
            raise PatternFamilyError(
                f"functional pattern applied to circuit type {print_type(scrutinee_type)}; "
                "use match circval"
            )

        entries: List[_Entry] = []
        match pat:
            case PUnit():
                if not isinstance(scrutinee_type, UnitAt):
                    raise TypeMismatchError(
                        f"pattern () cannot match a value of type {print_type(scrutinee_type)}"
                    )
                inner = env
            case PPair(left=x, right=y):
                if not isinstance(scrutinee_type, Tensor):
                    raise TypeMismatchError(
                        f"pattern ({x}, {y}) cannot match a value of type "
                        f"{print_type(scrutinee_type)}"
                    )
                inner, ex = self.bind(env, x, scrutinee_type.left)
                inner, ey = self.bind(inner, y, scrutinee_type.right)
                entries = [ex, ey]
            case PDown(name=x):
                if family is not Family.FF:
                    raise PatternFamilyError("down patterns only match functional terms")
                if not isinstance(scrutinee_type, Down):
                    raise TypeMismatchError(
                        f"pattern down {x} cannot match a value of type "
                        f"{print_type(scrutinee_type)}"
                    )
                inner, ex = self.bind(env, x, scrutinee_type.inner)
                entries = [ex]
            case _:
                raise TypeError(f"not a pattern: {pat!r}")

        bt, used = self.check(pat.body, inner, want, body_hint, path)
        body_mode = mode_of(bt)
        if family.body_color is F and body_mode == Mode.Q:
            raise ModeMismatchError("functional match body has a circuit type")
        for entry in entries:
            self._require_used(entry, used)
        used = used - {e.key for e in entries}
        if self.linear and not mode_geq(scrutinee_mode, body_mode):
            raise IndependenceError(
                f"cannot eliminate {print_type(scrutinee_type)} into a mode-{body_mode} result"
            )
        self._require_geq(used, body_mode, "match body")
        return bt, used


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def _run(checker: _Checker, ctx: TypingContext, p: Program, expected) -> CheckReport:
    try:
        env, entries = checker.initial_env(ctx)
        if expected is not None:
            check_type(expected)
        hint = Mode.Q if p.color is C else None
        ty, used = checker.check(p, env, expected, hint)
        for entry in entries:
            checker._require_used(entry, used)
    except PqaError as exc:
        logger.debug("check failed: %s", exc.message)
        return CheckReport(error=exc, judgements=checker.judgements)
    consumed = frozenset(e.name for e in entries if e.key in used)
    return CheckReport(type=ty, consumed=consumed, judgements=checker.judgements)


def check_pqa(
    sig: Signature,
    ctx: TypingContext,
    p: Program,
    expected: Optional[TypeExpr] = None,
    *,
    audit: bool = False,
) -> CheckReport:
    """Check *p* under the linear mode discipline.

    Parameters
    ----------
    sig:
        Gate signature.
    ctx:
        Typing context; mode-u bindings are unrestricted, others linear.
    p:
        Functional term or circuit.
    expected:
        Optional type to check against instead of synthesizing.
    audit:
        Record a :class:`Judgement` per node so the independence principle
        can be verified afterwards.

    Returns
    -------
    CheckReport
        With ``type`` set on success, ``error`` set otherwise.
    """
    return _run(_Checker(sig, linear=True, audit=audit), ctx, p, expected)


def check_pqx(
    sig: Signature,
    ctx: TypingContext,
    p: Program,
    expected: Optional[TypeExpr] = None,
) -> CheckReport:
    """Check *p* structurally: no splitting, no mode side-conditions."""
    return _run(_Checker(sig, linear=False), ctx, p, expected)


def check_pattern_pqa(
    sig: Signature,
    ctx: TypingContext,
    pat: Pattern,
    scrutinee_type: TypeExpr,
    expected: Optional[TypeExpr] = None,
) -> CheckReport:
    """Check that *pat* eliminates *scrutinee_type* under *ctx*."""
    checker = _Checker(sig, linear=True)
    try:
        env, entries = checker.initial_env(ctx)
        check_type(scrutinee_type)
        ty, used = checker.pattern(pat, scrutinee_type, env, expected)
        for entry in entries:
            checker._require_used(entry, used)
    except PqaError as exc:
        return CheckReport(error=exc)
    consumed = frozenset(e.name for e in entries if e.key in used)
    return CheckReport(type=ty, consumed=consumed)
