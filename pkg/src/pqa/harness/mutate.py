"""One-constructor mutations of well-typed programs.

Mutants are usually ill-typed.  They feed the robustness property: the
stepper must answer every one of them with a normal form, a fuel
verdict or a stuck diagnostic, never with a crash.
"""

from __future__ import annotations

import logging
import random
from dataclasses import replace
from typing import Callable, List, Optional, Sequence, Tuple

from pqa.encoding.stdlib import stdlib_signature
from pqa.syntax.names import all_names
from pqa.syntax.signature import Signature
from pqa.syntax.terms import (
    App,
    C,
    F,
    Family,
    Force,
    Gate,
    Lam,
    Match,
    Pair,
    PDown,
    Program,
    SuspTerm,
    Unit,
    Var,
    positions,
    replace_at,
    subterm_at,
)
from pqa.syntax.types import QUBIT, Arrow, Mode, Tensor, TypeExpr, UnitAt, Up

logger = logging.getLogger(__name__)

Mutation = Callable[[Program, random.Random, Sequence[str], Signature], Optional[Program]]

_ANNOTATIONS: Tuple[TypeExpr, ...] = (
    QUBIT,
    UnitAt(Mode.L),
    UnitAt(Mode.U),
    UnitAt(Mode.Q),
    Tensor(QUBIT, QUBIT, Mode.Q),
    Up(QUBIT, Mode.Q, Mode.L),
    Arrow(UnitAt(Mode.L), UnitAt(Mode.L), Mode.L),
)


def _other(color):
    return C if color is F else F


def _flip_var_color(p, rng, names, sig):
    if isinstance(p, Var):
        return replace(p, color=_other(p.color))
    return None


def _to_unit(p, rng, names, sig):
    if isinstance(p, Unit):
        return None
    return Unit(_other(p.color))


def _change_family(p, rng, names, sig):
    if not isinstance(p, Match) or isinstance(p.pattern, PDown):
        return None
    family = rng.choice([f for f in Family if f is not p.pattern.family])
    return replace(p, pattern=replace(p.pattern, family=family))


def _wrap_force(p, rng, names, sig):
    return Force(p, p.color)


def _wrap_susp(p, rng, names, sig):
    return SuspTerm(p)


def _rename_var(p, rng, names, sig):
    if not isinstance(p, Var):
        return None
    others = [n for n in names if n != p.name]
    return replace(p, name=rng.choice(others)) if others else None


def _drop_component(p, rng, names, sig):
    if isinstance(p, Pair):
        return p.left if rng.random() < 0.5 else p.right
    return None


def _change_gate(p, rng, names, sig):
    if not isinstance(p, Gate):
        return None
    others = sorted(g for g in sig.gates if g != p.name)
    return Gate(rng.choice(others)) if others else None


def _swap_application(p, rng, names, sig):
    if isinstance(p, App):
        return replace(p, fn=p.arg, arg=p.fn)
    return None


def _change_annotation(p, rng, names, sig):
    if not isinstance(p, Lam):
        return None
    return replace(p, annotation=rng.choice([t for t in _ANNOTATIONS if t != p.annotation]))


MUTATIONS: Tuple[Tuple[str, Mutation], ...] = (
    ("flip_var_color", _flip_var_color),
    ("to_unit", _to_unit),
    ("change_family", _change_family),
    ("wrap_force", _wrap_force),
    ("wrap_susp", _wrap_susp),
    ("rename_var", _rename_var),
    ("drop_component", _drop_component),
    ("change_gate", _change_gate),
    ("swap_application", _swap_application),
    ("change_annotation", _change_annotation),
)


def mutate(program: Program, rng: random.Random, sig: Optional[Signature] = None) -> Program:
    """Change exactly one constructor of *program* at a random position.

    When no drawn mutation applies, the whole program is wrapped in ``force``.
    """
    sig = sig if sig is not None else stdlib_signature()
    names = sorted(all_names(program))
    paths: List[Tuple[int, ...]] = list(positions(program))
    for _ in range(4 * len(paths)):
        path = rng.choice(paths)
        name, mutation = rng.choice(MUTATIONS)
        mutant = mutation(subterm_at(program, path), rng, names, sig)
        if mutant is not None:
            logger.debug("mutation %s at %s", name, path)
            return replace_at(program, path, mutant)
    return replace_at(program, (), Force(program, program.color))
