"""Source-level circuit-language types and their encoding as linear types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Union

from pqa.syntax.types import QUBIT, Arrow, Down, Mode, Tensor, TypeExpr, UnitAt, Up


@dataclass(frozen=True)
class PUnitType:
    def __str__(self) -> str:
        return "I"


@dataclass(frozen=True)
class PQubit:
    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PTensor:
    left: "PQType"
    right: "PQType"

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class PLolli:
    dom: "PQType"
    cod: "PQType"

    def __str__(self) -> str:
        return f"({self.dom} -o {self.cod})"


@dataclass(frozen=True)
class PCirc:
    """Boxed circuits from ``dom`` wires to ``cod`` wires; both simple."""

    dom: "PQType"
    cod: "PQType"

    def __post_init__(self) -> None:
        if not (is_simple_pq(self.dom) and is_simple_pq(self.cod)):
            raise ValueError(f"Circ takes simple types, got {self.dom} and {self.cod}")

    def __str__(self) -> str:
        return f"Circ({self.dom}, {self.cod})"


@dataclass(frozen=True)
class PBang:
    inner: "PQType"

    def __str__(self) -> str:
        return f"!{self.inner}"


PQType = Union[PUnitType, PQubit, PTensor, PLolli, PCirc, PBang]

I = PUnitType()
Q = PQubit()


def is_simple_pq(a: PQType) -> bool:
    match a:
        case PUnitType() | PQubit():
            return True
        case PTensor(left=x, right=y):
            return is_simple_pq(x) and is_simple_pq(y)
    return False


def encode_simple(s: PQType) -> TypeExpr:
    """The wire-bundle type of a simple type, at mode ``q``."""
    match s:
        case PUnitType():
            return UnitAt(Mode.Q)
        case PQubit():
            return QUBIT
        case PTensor(left=a, right=b):
            return Tensor(encode_simple(a), encode_simple(b), Mode.Q)
    raise ValueError(f"not a simple type: {s}")


def enc_type(a: PQType) -> TypeExpr:
    """Encode a source type as a mode-``l`` type.

    Shifts distribute over tensors so every wire is reachable through
    functional pattern matching.
    """
    match a:
        case PUnitType() | PQubit():
            return Up(encode_simple(a), Mode.Q, Mode.L)
        case PTensor(left=x, right=y):
            return Tensor(enc_type(x), enc_type(y), Mode.L)
        case PCirc(dom=s, cod=u):
            return Up(Arrow(encode_simple(s), encode_simple(u), Mode.Q), Mode.Q, Mode.L)
        case PLolli(dom=d, cod=c):
            return Arrow(enc_type(d), enc_type(c), Mode.L)
        case PBang(inner=inner):
            return Down(Up(enc_type(inner), Mode.L, Mode.U))
    raise ValueError(f"not a source type: {a!r}")


def simple_pqtypes(max_tensors: int) -> Iterator[PQType]:
    """Every simple type built with at most *max_tensors* tensor nodes."""
    by_size: List[List[PQType]] = [[I, Q]]
    for n in range(1, max_tensors + 1):
        by_size.append(
            [
                PTensor(a, b)
                for k in range(n)
                for a in by_size[k]
                for b in by_size[n - 1 - k]
            ]
        )
    for group in by_size:
        yield from group
