"""Names, α-equivalence and capture-avoiding substitution.

Programs use named binders.  Renaming draws from :class:`FreshNames`,
whose names carry the reserved ``%`` prefix and therefore never clash
with names written in source files.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Dict, Iterable, Mapping, Optional, Set, Tuple

from pqa.syntax.terms import (
    C,
    Gate,
    Lam,
    Match,
    Program,
    Var,
    children,
    rebind,
    with_children,
)

FRESH_PREFIX = "%"


class FreshNames:
    """Monotone fresh-name supply; one instance per normalization run."""

    def __init__(self) -> None:
        self._counter = 0

    def pick(self, base: str, avoid: Iterable[str] = ()) -> str:
        avoid = set(avoid)
        stem = _stem(base)
        while True:
            self._counter += 1
            name = f"{FRESH_PREFIX}{stem}{self._counter}"
            if name not in avoid:
                return name


def _stem(name: str) -> str:
    return name.lstrip(FRESH_PREFIX).rstrip("0123456789") or "v"


# ---------------------------------------------------------------------------
# Free and bound names
# ---------------------------------------------------------------------------


def binders_of(p: Program) -> Tuple[str, ...]:
    match p:
        case Lam(binder=x):
            return (x,)
        case Match(pattern=pat):
            return pat.binders
    return ()


def free_vars(p: Program) -> Set[str]:
    match p:
        case Var(name=n):
            return {n}
        case Lam(binder=x, body=b):
            return free_vars(b) - {x}
        case Match(scrutinee=s, pattern=pat):
            return free_vars(s) | (free_vars(pat.body) - set(pat.binders))
    out: Set[str] = set()
    for kid in children(p):
        out |= free_vars(kid)
    return out


def free_circuit_vars(p: Program) -> Set[str]:
    match p:
        case Var(name=n, color=color):
            return {n} if color is C else set()
        case Lam(binder=x, body=b):
            return free_circuit_vars(b) - {x}
        case Match(scrutinee=s, pattern=pat):
            return free_circuit_vars(s) | (free_circuit_vars(pat.body) - set(pat.binders))
    out: Set[str] = set()
    for kid in children(p):
        out |= free_circuit_vars(kid)
    return out


def all_names(p: Program) -> Set[str]:
    """Every variable name occurring in *p*, free or bound."""
    names = set(binders_of(p))
    if isinstance(p, Var):
        names.add(p.name)
    for kid in children(p):
        names |= all_names(kid)
    return names


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


def _rename(p: Program, ren: Mapping[str, str]) -> Program:
    """Rename free occurrences; targets must not occur anywhere in *p*."""
    if not ren:
        return p
    match p:
        case Var(name=n):
            return replace(p, name=ren[n]) if n in ren else p
        case Lam(binder=x, body=b):
            return replace(p, body=_rename(b, {k: v for k, v in ren.items() if k != x}))
        case Match(scrutinee=s, pattern=pat):
            inner = {k: v for k, v in ren.items() if k not in pat.binders}
            return replace(
                p,
                scrutinee=_rename(s, ren),
                pattern=replace(pat, body=_rename(pat.body, inner)),
            )
    return with_children(p, tuple(_rename(kid, ren) for kid in children(p)))


def freshen_binders(
    binders: Tuple[str, ...],
    body: Program,
    clashing: Iterable[str],
    fresh: FreshNames,
) -> Tuple[Tuple[str, ...], Program]:
    """Rename the binders that appear in *clashing* to fresh names."""
    clashing = set(clashing)
    if not clashing.intersection(binders):
        return binders, body
    avoid = clashing | all_names(body) | set(binders)
    ren: Dict[str, str] = {}
    for b in binders:
        if b in clashing:
            ren[b] = fresh.pick(b, avoid)
            avoid.add(ren[b])
    return tuple(ren.get(b, b) for b in binders), _rename(body, ren)


def _under(
    binders: Tuple[str, ...],
    body: Program,
    mapping: Mapping[str, Program],
    fresh: FreshNames,
) -> Tuple[Tuple[str, ...], Program]:
    body_fv = free_vars(body)
    inner = {k: v for k, v in mapping.items() if k not in binders and k in body_fv}
    if not inner:
        return binders, body
    danger: Set[str] = set(inner)
    for image in inner.values():
        danger |= free_vars(image)
    binders, body = freshen_binders(binders, body, danger, fresh)
    return binders, _subst(body, inner, fresh)


def _subst(p: Program, mapping: Mapping[str, Program], fresh: FreshNames) -> Program:
    match p:
        case Var(name=n):
            return mapping.get(n, p)
        case Lam(binder=x, body=b):
            (x2,), b2 = _under((x,), b, mapping, fresh)
            return replace(p, binder=x2, body=b2)
        case Match(scrutinee=s, pattern=pat):
            names, body = _under(pat.binders, pat.body, mapping, fresh)
            return replace(p, scrutinee=_subst(s, mapping, fresh), pattern=rebind(pat, names, body))
    kids = children(p)
    if not kids:
        return p
    return with_children(p, tuple(_subst(kid, mapping, fresh) for kid in kids))


def substitute(
    p: Program,
    mapping: Mapping[str, Program],
    fresh: Optional[FreshNames] = None,
) -> Program:
    """Simultaneous capture-avoiding substitution of ``mapping`` into *p*."""
    live = {k: v for k, v in mapping.items() if k in free_vars(p)}
    if not live:
        return p
    return _subst(p, live, fresh or FreshNames())


def subst(body: Program, x: str, v: Program, fresh: Optional[FreshNames] = None) -> Program:
    return substitute(body, {x: v}, fresh)


# ---------------------------------------------------------------------------
# α-equivalence
# ---------------------------------------------------------------------------


def alpha_eq(p: Program, q: Program, *, ignore_annotations: bool = False) -> bool:
    """True iff *p* and *q* differ only in the names of bound variables."""
    return _aeq(p, q, {}, {}, 0, ignore_annotations)


def _aeq(p, q, env_p: Dict[str, int], env_q: Dict[str, int], depth: int, loose: bool) -> bool:
    if type(p) is not type(q) or p.color != q.color:
        return False
    match p:
        case Var(name=n):
            lp, lq = env_p.get(n), env_q.get(q.name)
            if lp is None and lq is None:
                return n == q.name
            return lp == lq
        case Gate(name=n):
            return n == q.name
        case Lam(binder=x, body=b):
            if not loose and p.annotation != q.annotation:
                return False
            return _aeq(
                b, q.body, {**env_p, x: depth}, {**env_q, q.binder: depth}, depth + 1, loose
            )
        case Match(scrutinee=s, pattern=pat):
            qpat = q.pattern
            if type(pat) is not type(qpat) or pat.family != qpat.family:
                return False
            if not _aeq(s, q.scrutinee, env_p, env_q, depth, loose):
                return False
            inner_p, inner_q = dict(env_p), dict(env_q)
            for offset, (a, b) in enumerate(zip(pat.binders, qpat.binders)):
                inner_p[a] = depth + offset
                inner_q[b] = depth + offset
            span = len(pat.binders)
            return _aeq(pat.body, qpat.body, inner_p, inner_q, depth + span, loose)
    return all(
        _aeq(a, b, env_p, env_q, depth, loose) for a, b in zip(children(p), children(q))
    )


# ---------------------------------------------------------------------------
# Readable names
# ---------------------------------------------------------------------------


def tidy_names(p: Program) -> Program:
    """Rename fresh (``%``-prefixed) binders to readable, capture-free names."""
    return _tidy(p, {})


def _tidy_binders(
    binders: Tuple[str, ...], body: Program, ren: Mapping[str, str]
) -> Tuple[Tuple[str, ...], Program]:
    taken = {ren.get(v, v) for v in free_vars(body) if v not in binders}
    inner = {k: v for k, v in ren.items() if k not in binders}
    chosen = []
    for b in binders:
        stem = _stem(b) if b.startswith(FRESH_PREFIX) else b
        candidate, suffix = stem, 0
        while candidate in taken or candidate in chosen:
            suffix += 1
            candidate = f"{stem}{suffix}"
        chosen.append(candidate)
        inner[b] = candidate
    return tuple(chosen), _tidy(body, inner)


def _tidy(p: Program, ren: Mapping[str, str]) -> Program:
    match p:
        case Var(name=n):
            return replace(p, name=ren[n]) if n in ren else p
        case Lam(binder=x, body=b):
            (x2,), b2 = _tidy_binders((x,), b, ren)
            return replace(p, binder=x2, body=b2)
        case Match(scrutinee=s, pattern=pat):
            names, body = _tidy_binders(pat.binders, pat.body, ren)
            return replace(p, scrutinee=_tidy(s, ren), pattern=rebind(pat, names, body))
    kids = children(p)
    if not kids:
        return p
    return with_children(p, tuple(_tidy(kid, ren) for kid in kids))
