"""Gate signatures: the global typing of atomic gates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional

from pqa.errors import SignatureError
from pqa.syntax.types import Arrow, Mode, TypeExpr, is_simple, print_type


@dataclass(frozen=True)
class Signature:
    """Mapping from gate name to a circuit-mode arrow between simple types."""

    gates: Mapping[str, Arrow] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, ty in self.gates.items():
            validate_gate_type(name, ty)

    def __contains__(self, name: object) -> bool:
        return name in self.gates

    def __getitem__(self, name: str) -> Arrow:
        return self.gates[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def get(self, name: str) -> Optional[Arrow]:
        return self.gates.get(name)

    def extended(self, extra: Mapping[str, Arrow]) -> "Signature":
        merged: Dict[str, Arrow] = dict(self.gates)
        for name, ty in extra.items():
            if name in merged:
                raise SignatureError(f"duplicate gate {name}")
            merged[name] = ty
        return Signature(merged)


def validate_gate_type(name: str, ty: TypeExpr) -> None:
    if not (
        isinstance(ty, Arrow) and ty.mode == Mode.Q and is_simple(ty.dom) and is_simple(ty.cod)
    ):
        raise SignatureError(
            f"gate {name} must map a simple type to a simple type, "
            f"got {print_type(ty)}"
        )
