"""Modes and mode-annotated types.

Three modes: ``U`` (unrestricted functional), ``L`` (linear functional)
and ``Q`` (linear circuit).  The preorder is generated by U > L, L > Q and
Q > L, so L and Q are equivalent and U sits strictly above both.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from pqa.errors import TypeMismatchError


class Mode(Enum):
    U = "u"
    L = "l"
    Q = "q"

    def __str__(self) -> str:
        return self.value


_GENERATORS = {(Mode.U, Mode.L), (Mode.L, Mode.Q), (Mode.Q, Mode.L)}


def mode_geq(m: Mode, k: Mode) -> bool:
    """Reflexive-transitive closure of the generating relation."""
    if m == k:
        return True
    seen = {m}
    frontier = [m]
    while frontier:
        current = frontier.pop()
        for lo, hi in _GENERATORS:
            if lo == current and hi not in seen:
                if hi == k:
                    return True
                seen.add(hi)
                frontier.append(hi)
    return False


# ---------------------------------------------------------------------------
# Type expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitAt:
    mode: Mode


@dataclass(frozen=True)
class Qubit:
    pass


@dataclass(frozen=True)
class Tensor:
    left: "TypeExpr"
    right: "TypeExpr"
    mode: Mode


@dataclass(frozen=True)
class Arrow:
    dom: "TypeExpr"
    cod: "TypeExpr"
    mode: Mode


@dataclass(frozen=True)
class Up:
    """Upshift: suspends a type at ``lower`` into mode ``upper``.

    Only (Q -> L) and (L -> U) exist.
    """

    inner: "TypeExpr"
    lower: Mode
    upper: Mode


@dataclass(frozen=True)
class Down:
    """Downshift: a mode-``upper`` type viewed at mode ``lower``; only (L <- U)."""

    inner: "TypeExpr"
    lower: Mode = Mode.L
    upper: Mode = Mode.U


TypeExpr = Union[UnitAt, Qubit, Tensor, Arrow, Up, Down]

QUBIT = Qubit()

_SHIFT_ABOVE = {Mode.Q: Mode.L, Mode.L: Mode.U}


def mode_of(t: TypeExpr) -> Mode:
    match t:
        case UnitAt(mode=m) | Tensor(mode=m) | Arrow(mode=m):
            return m
        case Qubit():
            return Mode.Q
        case Up(upper=m):
            return m
        case Down(lower=m):
            return m
    raise TypeError(f"not a type: {t!r}")


def is_simple(t: TypeExpr) -> bool:
    """Simple types are the shapes of wire bundles: unit@q, qubit and their tensors."""
    match t:
        case UnitAt(mode=Mode.Q) | Qubit():
            return True
        case Tensor(left=a, right=b, mode=Mode.Q):
            return is_simple(a) and is_simple(b)
    return False


def is_linear(t: TypeExpr) -> bool:
    return mode_of(t) != Mode.U


def up(inner: TypeExpr) -> Up:
    """Build an upshift whose modes are fixed by the operand's mode."""
    lower = mode_of(inner)
    if lower not in _SHIFT_ABOVE:
        raise TypeMismatchError(f"cannot upshift a type at mode {lower}: {print_type(inner)}")
    return Up(inner, lower, _SHIFT_ABOVE[lower])


def down(inner: TypeExpr) -> Down:
    if mode_of(inner) != Mode.U:
        raise TypeMismatchError(f"Down expects a mode-u type, got {print_type(inner)}")
    return Down(inner)


def check_type(t: TypeExpr) -> None:
    """Raise :class:`TypeMismatchError` unless *t* is well formed."""
    match t:
        case UnitAt() | Qubit():
            return
        case Tensor(left=a, right=b, mode=m):
            check_type(a)
            check_type(b)
            if mode_of(a) != m or mode_of(b) != m:
                raise TypeMismatchError(f"tensor components must be at mode {m}: {print_type(t)}")
            if m == Mode.Q and not (is_simple(a) and is_simple(b)):
                raise TypeMismatchError(
                    f"circuit tensors combine simple types only: {print_type(t)}"
                )
        case Arrow(dom=a, cod=b, mode=m):
            check_type(a)
            check_type(b)
            if m == Mode.Q:
                if not (is_simple(a) and is_simple(b)):
                    raise TypeMismatchError(
                        f"circuit functions go between simple types: {print_type(t)}"
                    )
            elif mode_of(a) != m or mode_of(b) != m:
                raise TypeMismatchError(f"function components must be at mode {m}: {print_type(t)}")
        case Up(inner=a, lower=lo, upper=hi):
            check_type(a)
            if _SHIFT_ABOVE.get(lo) != hi or mode_of(a) != lo:
                raise TypeMismatchError(f"ill-formed upshift: {print_type(t)}")
        case Down(inner=a, lower=lo, upper=hi):
            check_type(a)
            if (lo, hi) != (Mode.L, Mode.U) or mode_of(a) != Mode.U:
                raise TypeMismatchError(f"ill-formed downshift: {print_type(t)}")
        case _:
            raise TypeMismatchError(f"not a type: {t!r}")


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _operand(t: TypeExpr) -> str:
    text = print_type(t)
    return f"({text})" if isinstance(t, (Tensor, Arrow)) else text


def print_type(t: TypeExpr) -> str:
    match t:
        case UnitAt(mode=m):
            return f"unit@{m}"
        case Qubit():
            return "qubit"
        case Tensor(left=a, right=b, mode=m):
            return f"{_operand(a)} * {_operand(b)} @{m}"
        case Arrow(dom=a, cod=b, mode=m):
            return f"{_operand(a)} -o {_operand(b)} @{m}"
        case Up(inner=a):
            return f"Up {_operand(a)}"
        case Down(inner=a):
            return f"Down {_operand(a)}"
    raise TypeError(f"not a type: {t!r}")
