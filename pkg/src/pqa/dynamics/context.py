"""Neutral variable contexts.

Reduction runs on functionally closed programs that may still mention
circuit variables bound by enclosing ``lam`` binders or by patterns on
neutral circuits.  A :class:`NeutralContext` lists those names; the typed
variant pairs each with the simple type of its wire bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Tuple, Union

from pqa.statics.context import TypingContext
from pqa.syntax.types import TypeExpr, is_simple, print_type


@dataclass(frozen=True)
class NeutralContext:
    names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate names in neutral context: {self.names}")

    @classmethod
    def of(cls, names: Union["NeutralContext", Iterable[str], None] = None) -> "NeutralContext":
        if names is None:
            return cls()
        if isinstance(names, NeutralContext):
            return names
        seen = dict.fromkeys(names)
        return cls(tuple(seen))

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def extended(self, *names: str) -> "NeutralContext":
        return NeutralContext(self.names + tuple(n for n in names if n not in self.names))


@dataclass(frozen=True)
class TypedNeutralContext:
    """Circuit variables with their simple types (Ψ)."""

    bindings: Tuple[Tuple[str, TypeExpr], ...] = ()

    def __post_init__(self) -> None:
        names = [name for name, _ in self.bindings]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in neutral context: {names}")
        for name, ty in self.bindings:
            if not is_simple(ty):
                raise ValueError(f"neutral variable {name} has non-simple type {print_type(ty)}")

    @classmethod
    def of(
        cls, items: Union[Mapping[str, TypeExpr], Iterable[Tuple[str, TypeExpr]], None] = None
    ) -> "TypedNeutralContext":
        if items is None:
            return cls()
        pairs = items.items() if isinstance(items, Mapping) else items
        return cls(tuple(pairs))

    def __iter__(self) -> Iterator[Tuple[str, TypeExpr]]:
        return iter(self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)

    def restricted(self, names: Iterable[str]) -> "TypedNeutralContext":
        keep = set(names)
        return TypedNeutralContext(tuple((n, t) for n, t in self.bindings if n in keep))


def ctp(psi: TypedNeutralContext) -> TypingContext:
    """Forget neutrality: the typing context of Ψ."""
    return TypingContext(psi.bindings)


def cneu(psi: TypedNeutralContext) -> NeutralContext:
    """Forget types: the neutral context of Ψ."""
    return NeutralContext(tuple(name for name, _ in psi.bindings))
