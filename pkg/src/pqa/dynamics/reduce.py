"""Small-step reduction for functional terms and circuits.

Every rule is an entry in a table keyed by node kind and color.  A rule
has a guard, evaluated on an unreduced program, and an action.  Guards
are tried in table order; with ``audit`` on, all guards of the kind are
evaluated and more than one firing is reported as a determinism failure.

Reduction goes under ``lam`` binders and under patterns whose scrutinee
is neutral, extending the neutral context with the bound wire names.
Binders that would shadow a name already in the neutral context are
renamed first.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from pqa.config import settings
from pqa.dynamics.classify import FormClass, PiLike, _check_scope, _classify
from pqa.dynamics.context import NeutralContext
from pqa.errors import DeterminismError, EliminationError, StuckError
from pqa.syntax.names import FreshNames, free_vars, freshen_binders, subst, substitute
from pqa.syntax.printer import print_program
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
    Pattern,
    PPair,
    Program,
    PUnit,
    SuspCirc,
    SuspTerm,
    Unit,
    rebind,
)

logger = logging.getLogger(__name__)


class Reduct(NamedTuple):
    program: Program
    rule: str


# ---------------------------------------------------------------------------
# Canonical elimination
# ---------------------------------------------------------------------------


def eliminate_canonical(k: Program, pat: Pattern, fresh: Optional[FreshNames] = None) -> Program:
    """Eliminate canonical form *k* into the body of *pat*.

    Raises
    ------
    EliminationError
        If *k* is not built by the constructor *pat* destructures.
    """
    match k, pat:
        case Unit(), PUnit(body=body):
            return body
        case Pair(left=a, right=b), PPair(left=x, right=y, body=body):
            return substitute(body, {x: a, y: b}, fresh)
        case DownIntro(body=v), PDown(name=x, body=body):
            return subst(body, x, v, fresh)
    raise EliminationError(
        f"cannot eliminate {print_program(k)} with a {type(pat).__name__} pattern"
    )


# ---------------------------------------------------------------------------
# Rule table
# ---------------------------------------------------------------------------


Guard = Callable[["_Stepper", NeutralContext, Program], bool]
Action = Callable[["_Stepper", NeutralContext, Program], Reduct]


@dataclass(frozen=True)
class Rule:
    name: str
    guard: Guard
    action: Action


def _kind(pi: NeutralContext, p: Program) -> FormClass:
    return _classify(pi, p)


def _nf(pi: NeutralContext, p: Program) -> bool:
    return _classify(pi, p).is_normal


def _red(pi: NeutralContext, p: Program) -> bool:
    return not _classify(pi, p).is_normal


def _is_nm(pi: NeutralContext, p: Program) -> bool:
    return _classify(pi, p) is FormClass.NORMAL_MATCH


def _under_pattern(pi: NeutralContext, p: Match) -> NeutralContext:
    return pi.extended(*p.pattern.binders)


class _Stepper:
    def __init__(self, fresh: FreshNames, audit: bool) -> None:
        self.fresh = fresh
        self.audit = audit

    def step(self, pi: NeutralContext, p: Program) -> Optional[Reduct]:
        if _nf(pi, p):
            return None
        rules = rules_for(p)
        if self.audit:
            fired = [rule for rule in rules if rule.guard(self, pi, p)]
            if len(fired) > 1:
                names = ", ".join(rule.name for rule in fired)
                raise DeterminismError(f"rules {names} all apply to {print_program(p)}")
        else:
            fired = next(([rule] for rule in rules if rule.guard(self, pi, p)), [])
        if not fired:
            raise StuckError(f"no reduction rule applies to {print_program(p)}")
        return fired[0].action(self, pi, p)

    def sub(self, pi: NeutralContext, p: Program) -> Reduct:
        reduct = self.step(pi, p)
        if reduct is None:
            raise StuckError(f"expected a reducible subterm, got normal {print_program(p)}")
        return reduct

    # -- binders ----------------------------------------------------------------

    def open_binders(
        self, pi: NeutralContext, binders: Tuple[str, ...], body: Program
    ) -> Tuple[Tuple[str, ...], Program]:
        return freshen_binders(binders, body, set(pi), self.fresh)

    def commute(self, nm: Match, rebuild: Callable[[Program], Program], color: Color) -> Program:
        """Push the elimination ``rebuild`` into the body of neutral match *nm*."""
        pat = nm.pattern
        moved = free_vars(rebuild(Unit(F)))
        names, body = freshen_binders(pat.binders, pat.body, moved, self.fresh)
        family = Family.QQ if color is C else Family.QF
        new_pat = replace(rebind(pat, names, rebuild(body)), family=family)
        return Match(nm.scrutinee, new_pat)


# -- congruence helpers -------------------------------------------------------


def _left(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _red(pi, p.left),
        lambda s, pi, p: Reduct(replace(p, left=s.sub(pi, p.left).program), name),
    )


def _right(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _nf(pi, p.left) and _red(pi, p.right),
        lambda s, pi, p: Reduct(replace(p, right=s.sub(pi, p.right).program), name),
    )


def _fn(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _red(pi, p.fn),
        lambda s, pi, p: Reduct(replace(p, fn=s.sub(pi, p.fn).program), name),
    )


def _arg(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _nf(pi, p.fn) and _red(pi, p.arg),
        lambda s, pi, p: Reduct(replace(p, arg=s.sub(pi, p.arg).program), name),
    )


def _beta(name: str, color: Color) -> Rule:
    def guard(s, pi, p):
        return (
            isinstance(p.fn, Lam)
            and p.fn.color is color
            and _nf(pi, p.fn)
            and _nf(pi, p.arg)
        )

    def action(s, pi, p):
        return Reduct(subst(p.fn.body, p.fn.binder, p.arg, s.fresh), name)

    return Rule(name, guard, action)


def _inner_force(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _red(pi, p.inner),
        lambda s, pi, p: Reduct(replace(p, inner=s.sub(pi, p.inner).program), name),
    )


def _force_cc(name: str, color: Color) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _is_nm(pi, p.inner),
        lambda s, pi, p: Reduct(s.commute(p.inner, lambda v: Force(v, color), color), name),
    )


def _scrutinee(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _red(pi, p.scrutinee),
        lambda s, pi, p: Reduct(replace(p, scrutinee=s.sub(pi, p.scrutinee).program), name),
    )


def _eliminate(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _kind(pi, p.scrutinee) is FormClass.CANONICAL,
        lambda s, pi, p: Reduct(eliminate_canonical(p.scrutinee, p.pattern, s.fresh), name),
    )


def _match_body(name: str) -> Rule:
    def guard(s, pi, p):
        if _kind(pi, p.scrutinee) is not FormClass.NEUTRAL:
            return False
        return _red(_under_pattern(pi, p), p.pattern.body)

    def action(s, pi, p):
        pat = p.pattern
        names, body = s.open_binders(pi, pat.binders, pat.body)
        reduct = s.sub(pi.extended(*names), body)
        return Reduct(replace(p, pattern=rebind(pat, names, reduct.program)), name)

    return Rule(name, guard, action)


def _match_cc(name: str) -> Rule:
    def action(s, pi, p):
        color = p.body_color
        return Reduct(
            s.commute(p.scrutinee, lambda v: Match(v, p.pattern), color),
            name,
        )

    return Rule(name, lambda s, pi, p: _is_nm(pi, p.scrutinee), action)


def _lam_body(name: str) -> Rule:
    def guard(s, pi, p):
        return _red(pi.extended(p.binder), p.body)

    def action(s, pi, p):
        (x,), body = s.open_binders(pi, (p.binder,), p.body)
        reduct = s.sub(pi.extended(x), body)
        return Reduct(replace(p, binder=x, body=reduct.program), name)

    return Rule(name, guard, action)


def _app_cc(name: str, color: Color) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: _is_nm(pi, p.fn) and _nf(pi, p.arg),
        lambda s, pi, p: Reduct(s.commute(p.fn, lambda v: App(v, p.arg, color), color), name),
    )


def _gate_cc(name: str) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: isinstance(p.fn, Gate) and _is_nm(pi, p.arg),
        lambda s, pi, p: Reduct(s.commute(p.arg, lambda v: App(p.fn, v, C), C), name),
    )


def _unsuspend(name: str, kind: type) -> Rule:
    return Rule(
        name,
        lambda s, pi, p: isinstance(p.inner, kind),
        lambda s, pi, p: Reduct(p.inner.body, name),
    )


_RULES: Dict[Tuple[type, Color], Tuple[Rule, ...]] = {
    (App, F): (
        _fn("fstep/app/1"),
        _arg("fstep/app/2"),
        _beta("fstep/app/beta", F),
        _app_cc("fstep/app/cc", F),
    ),
    (Force, F): (
        _unsuspend("fstep/force", SuspTerm),
        _inner_force("fstep/force/1"),
        _force_cc("fstep/force/cc", F),
    ),
    (Pair, F): (_left("fstep/pair/1"), _right("fstep/pair/2")),
    (DownIntro, F): (
        Rule(
            "fstep/down",
            lambda s, pi, p: _red(pi, p.body),
            lambda s, pi, p: Reduct(replace(p, body=s.sub(pi, p.body).program), "fstep/down"),
        ),
    ),
    (App, C): (
        _fn("cstep/app/1"),
        _arg("cstep/app/2"),
        _beta("cstep/app/beta", C),
        _app_cc("cstep/app/cc/1", C),
        _gate_cc("cstep/app/cc/2"),
    ),
    (Lam, C): (_lam_body("cstep/lam"),),
    (Force, C): (
        _unsuspend("cstep/force", SuspCirc),
        _inner_force("cstep/force/1"),
        _force_cc("cstep/force/cc", C),
    ),
    (Pair, C): (_left("cstep/pair/1"), _right("cstep/pair/2")),
}

_MATCH_RULES: Dict[Family, Tuple[Rule, ...]] = {
    Family.FF: (
        _scrutinee("fstep/m/f"),
        _eliminate("fstep/m/k"),
        _match_cc("fstep/m/f/cc"),
    ),
    Family.QF: (
        _scrutinee("fstep/m/q"),
        _eliminate("fstep/m/k"),
        _match_body("fstep/m/q/r"),
        _match_cc("fstep/m/q/cc"),
    ),
    Family.QQ: (
        _scrutinee("cstep/m"),
        _eliminate("cstep/m/k"),
        _match_body("cstep/m/r"),
        _match_cc("cstep/m/cc"),
    ),
}


def rules_for(p: Program) -> Tuple[Rule, ...]:
    if isinstance(p, Match):
        return _MATCH_RULES[p.family]
    return _RULES.get((type(p), p.color), ())


RULE_NAMES: List[str] = list(
    dict.fromkeys(
        rule.name
        for table in (_RULES.values(), _MATCH_RULES.values())
        for rules in table
        for rule in rules
    )
)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def step(
    pi: PiLike,
    p: Program,
    *,
    fresh: Optional[FreshNames] = None,
    audit: Optional[bool] = None,
) -> Optional[Reduct]:
    """Perform one reduction step.

    Parameters
    ----------
    pi:
        Neutral variables in scope; *p* must be functionally closed with
        its free circuit variables in *pi*.
    p:
        Program to reduce.
    fresh:
        Fresh-name supply shared across the steps of one run.
    audit:
        Evaluate every rule guard and check exactly one fires.  Defaults
        to ``PQA_AUDIT``.

    Returns
    -------
    Reduct or None
        The successor and the name of the rule that contracted the redex,
        or ``None`` when *p* is normal.

    Raises
    ------
    StuckError
        If *p* is not normal and no rule applies.
    DeterminismError
        If ``audit`` is on and more than one rule applies.
    UnboundCircuitVariableError
        If *p* is not functionally closed or mentions names outside *pi*.
    """
    pi = NeutralContext.of(pi)
    _check_scope(pi, p)
    audit = settings.PQA_AUDIT if audit is None else audit
    return _Stepper(fresh or FreshNames(), audit).step(pi, p)
