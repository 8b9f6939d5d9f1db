"""A declarative re-check of the linear system by exhaustive context splitting.

:func:`check_pqa` threads the context through a term and reports which
linear bindings each subterm consumed.  The oracle here instead reads the
splitting rules literally: every binary node tries every partition of its
linear bindings between its two premises.  The two agree exactly when
the leftover reading of the rules is complete, which the harness tests
on generated terms.

Bidirectional conventions (expected types, the mode of a bare ``()``,
the scrutinee-mode retry of functional matches) are the checker's, so a
disagreement always points at context handling.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from pqa.config import settings
from pqa.encoding.stdlib import stdlib_signature
from pqa.errors import OracleLimitError, PqaError
from pqa.statics.context import TypingContext
from pqa.syntax.names import free_vars
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
)

logger = logging.getLogger(__name__)

# Bindings are keyed by integers: context entries are negative, binders
# derive theirs from the identity of the binding node.
Env = Tuple[Tuple[str, int, TypeExpr], ...]
Delta = FrozenSet[int]

_NONE: Delta = frozenset()


def _lookup(env: Env, name: str) -> Optional[Tuple[int, TypeExpr]]:
    for bound, key, ty in reversed(env):
        if bound == name:
            return key, ty
    return None


def _flexible(p: Program) -> bool:
    match p:
        case Unit(color=color):
            return color is F
        case Pair(left=a, right=b, color=color):
            return color is F and _flexible(a) and _flexible(b)
    return False


def _has_functional_unit(p: Program) -> bool:
    match p:
        case Unit(color=color):
            return color is F
        case Pair(left=a, right=b):
            return _has_functional_unit(a) or _has_functional_unit(b)
        case Match(scrutinee=s, pattern=pat):
            return _has_functional_unit(s) or _has_functional_unit(pat.body)
    return False


class _Oracle:
    def __init__(self, sig: Signature) -> None:
        self.sig = sig
        self.types: Dict[int, TypeExpr] = {}
        self.memo: Dict[tuple, Optional[TypeExpr]] = {}
        self.free: Dict[int, FrozenSet[str]] = {}

    def _bind(self, env: Env, name: str, key: int, ty: TypeExpr) -> Env:
        self.types[key] = ty
        return env + ((name, key, ty),)

    def _linear(self, key: int, ty: TypeExpr) -> Delta:
        return frozenset({key}) if is_linear(ty) else _NONE

    def _geq(self, delta: Delta, k: Mode) -> bool:
        return all(mode_geq(mode_of(self.types[key]), k) for key in delta)

    def _free(self, p: Program) -> FrozenSet[str]:
        found = self.free.get(id(p))
        if found is None:
            found = self.free[id(p)] = frozenset(free_vars(p))
        return found

    @staticmethod
    def _visible(env: Env, key: int) -> Optional[str]:
        name = next(n for n, k, _ in env if k == key)
        return name if _lookup(env, name)[0] == key else None

    def _reachable(self, p: Program, env: Env, delta: Delta) -> bool:
        """Every binding in *delta* is still visible by name in *p*."""
        names = self._free(p)
        return all(self._visible(env, key) in names for key in delta)

    def _splits(
        self, delta: Delta, env: Env, left: FrozenSet[str], right: FrozenSet[str]
    ) -> Iterator[Tuple[Delta, Delta]]:
        """Partitions of *delta* between premises whose free names are *left* and *right*.

        A binding free in only one premise can only go there; the other
        choice fails at its variable rule, so it is not enumerated.
        """
        forced_left: Set[int] = set()
        forced_right: Set[int] = set()
        either: List[int] = []
        for key in sorted(delta):
            name = self._visible(env, key)
            in_left, in_right = name in left, name in right
            if in_left and in_right:
                either.append(key)
            elif in_left:
                forced_left.add(key)
            elif in_right:
                forced_right.add(key)
            else:
                return
        for r in range(len(either) + 1):
            for chosen in itertools.combinations(either, r):
                rest = set(either) - set(chosen)
                yield frozenset(forced_left.union(chosen)), frozenset(forced_right | rest)

    # -- judgement ------------------------------------------------------------

    def typ(
        self,
        p: Program,
        env: Env,
        delta: Delta,
        want: Optional[TypeExpr] = None,
        hint: Optional[Mode] = None,
    ) -> Optional[TypeExpr]:
        """The type of *p* using exactly the linear bindings *delta*, if any."""
        if want is not None:
            hint = mode_of(want)
        memo_key = (id(p), env, delta, want, hint)
        if memo_key in self.memo:
            return self.memo[memo_key]
        ty: Optional[TypeExpr] = None
        if self._reachable(p, env, delta):
            try:
                ty = self._synth(p, env, delta, want, hint)
            except PqaError:
                ty = None
            if want is not None and ty != want:
                ty = None
        self.memo[memo_key] = ty
        return ty

    def _synth(self, p, env: Env, delta: Delta, want, hint) -> Optional[TypeExpr]:
        match p:
            case Var(name=n, color=color):
                found = _lookup(env, n)
                if found is None:
                    return None
                key, ty = found
                if delta != self._linear(key, ty):
                    return None
                mode = mode_of(ty)
                if color is F and mode == Mode.Q:
                    return None
                if color is C and (mode != Mode.Q or not is_simple(ty)):
                    return None
                return ty
            case Unit(color=color):
                if delta:
                    return None
                if color is C:
                    return UnitAt(Mode.Q)
                return UnitAt(hint if hint in (Mode.U, Mode.L) else Mode.L)
            case Gate(name=g):
                return None if delta else self.sig.get(g)
            case Lam():
                return self._lam(p, env, delta, want)
            case Pair():
                return self._pair(p, env, delta, want, hint)
            case SuspTerm(body=m):
                if not self._geq(delta, Mode.U):
                    return None
                inner = want.inner if isinstance(want, Up) and want.lower == Mode.L else None
                a = self.typ(m, env, delta, inner, Mode.L)
                return Up(a, Mode.L, Mode.U) if a is not None and mode_of(a) == Mode.L else None
            case SuspCirc(body=c):
                if not self._geq(delta, Mode.L):
                    return None
                inner = want.inner if isinstance(want, Up) and want.lower == Mode.Q else None
                a = self.typ(c, env, delta, inner, Mode.Q)
                return Up(a, Mode.Q, Mode.L) if a is not None else None
            case DownIntro(body=m):
                if not self._geq(delta, Mode.U):
                    return None
                inner = want.inner if isinstance(want, Down) else None
                a = self.typ(m, env, delta, inner, Mode.U)
                return Down(a) if a is not None and mode_of(a) == Mode.U else None
            case App():
                return self._app(p, env, delta)
            case Force(inner=m, color=color):
                t = self.typ(m, env, delta, None, Mode.U if color is F else Mode.L)
                if not isinstance(t, Up):
                    return None
                if t.lower != (Mode.L if color is F else Mode.Q):
                    return None
                return t.inner
            case Match():
                return self._match(p, env, delta, want, hint)
        raise TypeError(f"not a program: {p!r}")

    def _lam(self, p: Lam, env: Env, delta: Delta, want) -> Optional[TypeExpr]:
        a = p.annotation
        if a is None:
            return None
        check_type(a)
        mode = mode_of(a)
        if p.color is F and mode == Mode.Q:
            return None
        if p.color is C and not is_simple(a):
            return None
        body_want = None
        if isinstance(want, Arrow):
            if want.dom != a:
                return None
            body_want = want.cod
        key = id(p) * 4
        inner = self._bind(env, p.binder, key, a)
        b = self.typ(p.body, inner, delta | self._linear(key, a), body_want, mode)
        if b is None:
            return None
        if p.color is C:
            return Arrow(a, b, Mode.Q) if is_simple(b) else None
        return Arrow(a, b, mode) if mode_of(b) == mode else None

    def _pair(self, p: Pair, env: Env, delta: Delta, want, hint) -> Optional[TypeExpr]:
        for dl, dr in self._splits(delta, env, self._free(p.left), self._free(p.right)):
            if isinstance(want, Tensor):
                lt = self.typ(p.left, env, dl, want.left)
                rt = self.typ(p.right, env, dr, want.right) if lt is not None else None
            elif p.color is C:
                lt = self.typ(p.left, env, dl, None, Mode.Q)
                rt = self.typ(p.right, env, dr, None, Mode.Q) if lt is not None else None
            elif _flexible(p.left) and not _flexible(p.right):
                rt = self.typ(p.right, env, dr, None, hint)
                lt = self.typ(p.left, env, dl, None, mode_of(rt)) if rt is not None else None
            else:
                lt = self.typ(p.left, env, dl, None, hint)
                rt = self.typ(p.right, env, dr, None, mode_of(lt)) if lt is not None else None
            if lt is None or rt is None:
                continue
            if p.color is C:
                if is_simple(lt) and is_simple(rt):
                    return Tensor(lt, rt, Mode.Q)
            elif mode_of(lt) == mode_of(rt):
                return Tensor(lt, rt, mode_of(lt))
        return None

    def _app(self, p: App, env: Env, delta: Delta) -> Optional[TypeExpr]:
        for df, da in self._splits(delta, env, self._free(p.fn), self._free(p.arg)):
            ft = self.typ(p.fn, env, df, None, None if p.color is F else Mode.Q)
            if not isinstance(ft, Arrow):
                continue
            if (p.color is C) != (ft.mode == Mode.Q):
                continue
            if self.typ(p.arg, env, da, ft.dom) is not None:
                return ft.cod
        return None

    def _match(self, p: Match, env: Env, delta: Delta, want, hint) -> Optional[TypeExpr]:
        if p.family is not Family.FF:
            attempts: List[Optional[Mode]] = [Mode.Q]
        else:
            attempts = [hint]
            if hint != Mode.U and _has_functional_unit(p.scrutinee):
                attempts.append(Mode.U)
        body_names = self._free(p.pattern.body) - set(p.pattern.binders)
        for scrutinee_hint in attempts:
            for ds, db in self._splits(delta, env, self._free(p.scrutinee), body_names):
                st = self.typ(p.scrutinee, env, ds, None, scrutinee_hint)
                if st is None:
                    continue
                bt = self._pattern(p.pattern, st, env, db, want, hint)
                if bt is not None:
                    return bt
        return None

    def _pattern(
        self, pat: Pattern, st: TypeExpr, env: Env, delta: Delta, want, hint
    ) -> Optional[TypeExpr]:
        family = pat.family
        scrutinee_mode = mode_of(st)
        if (family.scrutinee_color is C) != (scrutinee_mode == Mode.Q):
            return None
        base = id(pat) * 4
        inner, bound = env, _NONE
        match pat:
            case PUnit():
                if not isinstance(st, UnitAt):
                    return None
            case PPair(left=x, right=y):
                if not isinstance(st, Tensor):
                    return None
                inner = self._bind(inner, x, base, st.left)
                inner = self._bind(inner, y, base + 1, st.right)
                bound = self._linear(base, st.left) | self._linear(base + 1, st.right)
            case PDown(name=x):
                if family is not Family.FF or not isinstance(st, Down):
                    return None
                inner = self._bind(inner, x, base, st.inner)
                bound = self._linear(base, st.inner)
        body_hint = hint if family.body_color is F else Mode.Q
        bt = self.typ(pat.body, inner, delta | bound, want, body_hint)
        if bt is None:
            return None
        body_mode = mode_of(bt)
        if family.body_color is F and body_mode == Mode.Q:
            return None
        if not mode_geq(scrutinee_mode, body_mode) or not self._geq(delta, body_mode):
            return None
        return bt


def brute_force_split_check(
    ctx: TypingContext,
    p: Program,
    goal: Optional[TypeExpr] = None,
    sig: Optional[Signature] = None,
) -> bool:
    """Whether some split of *ctx* derives ``ctx ⊢ p : goal`` in the linear system.

    Raises
    ------
    OracleLimitError
        When *ctx* has more linear bindings than ``PQA_ORACLE_MAX_LINEAR``.
    """
    linear = ctx.linear()
    if len(linear) > settings.PQA_ORACLE_MAX_LINEAR:
        raise OracleLimitError(
            f"{len(linear)} linear bindings exceed the oracle limit "
            f"of {settings.PQA_ORACLE_MAX_LINEAR}"
        )
    oracle = _Oracle(sig if sig is not None else stdlib_signature())
    env: Env = ()
    delta: Delta = _NONE
    try:
        for index, (name, ty) in enumerate(ctx):
            check_type(ty)
            if mode_of(ty) == Mode.Q and not is_simple(ty):
                return False
            key = -1 - index
            env = oracle._bind(env, name, key, ty)
            delta |= oracle._linear(key, ty)
        if goal is not None:
            check_type(goal)
    except PqaError:
        return False
    hint = Mode.Q if p.color is C else None
    verdict = oracle.typ(p, env, delta, goal, hint) is not None
    logger.debug("oracle verdict %s after %d judgements", verdict, len(oracle.memo))
    return verdict
