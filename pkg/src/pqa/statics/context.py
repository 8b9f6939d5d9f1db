"""Typing contexts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Tuple, Union

from pqa.syntax.types import Mode, TypeExpr, is_linear, mode_geq, mode_of


@dataclass(frozen=True)
class TypingContext:
    """Ordered bindings ``x : A``; names are distinct."""

    bindings: Tuple[Tuple[str, TypeExpr], ...] = ()

    def __post_init__(self) -> None:
        names = [name for name, _ in self.bindings]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate names in typing context: {names}")

    @classmethod
    def of(
        cls, items: Union[Mapping[str, TypeExpr], Iterable[Tuple[str, TypeExpr]], None] = None
    ) -> "TypingContext":
        if items is None:
            return cls()
        pairs = items.items() if isinstance(items, Mapping) else items
        return cls(tuple(pairs))

    def __iter__(self) -> Iterator[Tuple[str, TypeExpr]]:
        return iter(self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)

    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.bindings)

    def lookup(self, name: str) -> Optional[TypeExpr]:
        for bound, ty in self.bindings:
            if bound == name:
                return ty
        return None

    def unrestricted(self) -> "TypingContext":
        return TypingContext(tuple((n, t) for n, t in self.bindings if not is_linear(t)))

    def linear(self) -> "TypingContext":
        return TypingContext(tuple((n, t) for n, t in self.bindings if is_linear(t)))

    def extended(self, name: str, ty: TypeExpr) -> "TypingContext":
        return TypingContext(self.bindings + ((name, ty),))


def geq_mode(ctx: TypingContext, k: Mode) -> bool:
    """The relation Δ ≥ k: every binding sits at a mode at least *k*."""
    return all(mode_geq(mode_of(ty), k) for _, ty in ctx)
