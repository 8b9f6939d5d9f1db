"""Program pipeline behind the command line.

Orchestrates the full flow for one source file:

1. Read and parse the program.
2. Type check it under the linear system (or the structural one).
3. Normalize it with a fuel budget, forcing suspended circuits first
   when a diagram is wanted.
4. Read the normal circuit as a diagram and render it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional, Union

from pqa.circuit.diagram import Diagram, extract_diagram
from pqa.circuit.grammar import NormalFormReport, check_normal_grammar
from pqa.circuit.render import render_ascii, render_dot
from pqa.config import settings
from pqa.dynamics.context import TypedNeutralContext
from pqa.dynamics.normalize import StepTrace, normalize
from pqa.encoding.stdlib import load_signature_file
from pqa.errors import CircuitError
from pqa.statics.checker import CheckReport, check_pqa, check_pqx
from pqa.statics.context import TypingContext
from pqa.syntax.parser import parse_program
from pqa.syntax.signature import Signature
from pqa.syntax.terms import C, Force, Program
from pqa.syntax.types import Arrow, Mode, TypeExpr, Up, is_simple, print_type

logger = logging.getLogger(__name__)

System = Literal["pqa", "pqx"]
Emit = Literal["ascii", "dot"]


# ---------------------------------------------------------------------------
# Result data classes
# ---------------------------------------------------------------------------


@dataclass
class PipelineResult:
    """Everything one run learned about a program."""

    source: Path
    program: Program
    report: CheckReport
    trace: Optional[StepTrace] = None
    grammar: Optional[NormalFormReport] = None
    diagram: Optional[Diagram] = None
    rendered: Optional[str] = None

    @property
    def type(self) -> Optional[TypeExpr]:
        return self.report.type


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _circuit_type(ty: TypeExpr) -> bool:
    return is_simple(ty) or isinstance(ty, Arrow) and ty.mode is Mode.Q


def _to_render(program: Program, ty: TypeExpr) -> tuple[Program, TypeExpr]:
    """The circuit to normalize for drawing, and its type."""
    if isinstance(ty, Up) and ty.lower is Mode.Q:
        return Force(program, C), ty.inner
    if _circuit_type(ty):
        return program, ty
    raise CircuitError(f"cannot draw a program of type {print_type(ty)}")


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------


class ProgramPipeline:
    """High-level pipeline: source file in, type / normal form / diagram out."""

    def __init__(
        self,
        sig: Optional[Signature] = None,
        *,
        system: System = "pqa",
        fuel: Optional[int] = None,
        audit: Optional[bool] = None,
    ) -> None:
        self._sig = sig if sig is not None else load_signature_file(settings.PQA_STDLIB)
        self._system = system
        self._fuel = fuel if fuel is not None else settings.PQA_FUEL
        self._audit = audit
        if self._fuel <= 0:
            raise ValueError(f"fuel must be positive, got {self._fuel}")

    @classmethod
    def from_signature_path(
        cls, path: Optional[Union[str, Path]] = None, **options
    ) -> "ProgramPipeline":
        return cls(load_signature_file(path or settings.PQA_STDLIB), **options)

    @property
    def signature(self) -> Signature:
        return self._sig

    def load(self, path: Union[str, Path]) -> Program:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Program file not found: {path}")
        program = parse_program(path.read_text(encoding="utf-8"))
        logger.info("Parsed %s", path)
        return program

    def check(self, path: Union[str, Path]) -> PipelineResult:
        """Parse and type check *path*; the verdict is in ``result.report``."""
        path = Path(path)
        program = self.load(path)
        checker = check_pqa if self._system == "pqa" else check_pqx
        report = checker(self._sig, TypingContext(), program)
        if report.ok:
            logger.info("Typed %s under %s: %s", path, self._system, print_type(report.type))
        return PipelineResult(path, program, report)

    def normalize(
        self, path: Union[str, Path], *, unsafe: bool = False, record: bool = True
    ) -> PipelineResult:
        """Type check, then reduce to a normal form within the fuel budget.

        Raises
        ------
        PqaError
            The checker's error, unless *unsafe* is set.
        """
        result = self.check(path)
        if not result.report.ok and not unsafe:
            raise result.report.error
        result.trace = normalize((), result.program, self._fuel, audit=self._audit, record=record)
        logger.info(
            "Normalized %s: %s after %d steps",
            result.source,
            type(result.trace.status).__name__,
            len(result.trace.steps),
        )
        return result

    def circuit(self, path: Union[str, Path], emit: Emit = "ascii") -> PipelineResult:
        """Normalize a circuit (forcing it if suspended) and render its diagram.

        When the fuel runs out, the result carries the trace but no diagram.

        Raises
        ------
        PqaError
            Typing errors, or :class:`CircuitError` for non-circuit types.
        """
        result = self.check(path)
        if not result.report.ok:
            raise result.report.error
        target, ty = _to_render(result.program, result.report.type)
        result.trace = normalize((), target, self._fuel, audit=self._audit, record=False)
        if not result.trace.is_normal:
            return result
        normal = result.trace.result
        psi = TypedNeutralContext()
        result.grammar = check_normal_grammar(ty, psi, normal, self._sig)
        if not result.grammar.conforms:
            raise CircuitError(result.grammar.describe())
        result.diagram = extract_diagram(psi, normal, ty, self._sig)
        render = render_dot if emit == "dot" else render_ascii
        result.rendered = render(result.diagram)
        logger.info("Rendered %s: %d gates as %s", result.source, len(result.diagram.gates), emit)
        return result
