"""Type-preserving shrinking of counterexamples."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional

from pqa.errors import GenerationError
from pqa.harness.generator import GenConfig, Path, Site, minimal_term
from pqa.statics.context import TypingContext
from pqa.syntax.terms import Program, replace_at, size, subterm_at
from pqa.syntax.types import TypeExpr

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShrinkResult:
    program: Program
    steps: int


def _below(path: Path, root: Path) -> bool:
    return len(path) > len(root) and path[: len(root)] == root


def shrink(
    program: Program,
    goal: TypeExpr,
    ctx: TypingContext,
    still_fails: Callable[[Program], bool],
    sites: Optional[Mapping[Path, Site]] = None,
    cfg: Optional[GenConfig] = None,
) -> ShrinkResult:
    """Replace generated subprograms by smaller ones of the same type while *still_fails*.

    Every candidate is the structural term for a recorded generation site,
    so it has the site's type under the site's bindings and the shrunk
    program stays well typed.  Sites are tried in pre-order; after a
    successful replacement the sites below it are forgotten and the scan
    restarts.
    """
    cfg = cfg if cfg is not None else GenConfig()
    current = program
    pending: Dict[Path, Site] = dict(sites or {})
    pending.setdefault((), Site(goal, ctx.linear().bindings, ctx.unrestricted().bindings))
    steps = 0
    progress = True
    while progress:
        progress = False
        for path in sorted(pending):
            old = subterm_at(current, path)
            try:
                candidate = minimal_term(cfg, pending[path], current)
            except GenerationError:
                continue
            if size(candidate) >= size(old):
                continue
            shrunk = replace_at(current, path, candidate)
            if not still_fails(shrunk):
                continue
            current = shrunk
            steps += 1
            logger.debug("shrink step %d at %s: size %d", steps, path, size(current))
            pending = {p: s for p, s in pending.items() if not _below(p, path)}
            progress = True
            break
    return ShrinkResult(current, steps)
