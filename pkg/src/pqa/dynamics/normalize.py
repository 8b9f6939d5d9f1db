"""Fuel-bounded normalization and step traces."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from pqa.config import settings
from pqa.dynamics.classify import PiLike, is_normal
from pqa.dynamics.context import NeutralContext
from pqa.dynamics.reduce import step
from pqa.errors import DeterminismError, DynamicsError
from pqa.syntax.names import FreshNames
from pqa.syntax.printer import print_program
from pqa.syntax.terms import Program

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Normal:
    program: Program


@dataclass(frozen=True)
class FuelExhausted:
    program: Program


@dataclass(frozen=True)
class Stuck:
    program: Program
    error: DynamicsError


Status = Union[Normal, FuelExhausted, Stuck]


@dataclass
class StepTrace:
    """The reduction sequence of one run.

    ``steps[i]`` holds the program produced by step ``i + 1`` and the rule
    that produced it.
    """

    start: Program
    steps: List[Tuple[Program, str]] = field(default_factory=list)
    status: Optional[Status] = None

    @property
    def result(self) -> Program:
        return self.status.program if self.status is not None else self.start

    @property
    def is_normal(self) -> bool:
        return isinstance(self.status, Normal)

    @property
    def programs(self) -> List[Program]:
        return [self.start] + [program for program, _ in self.steps]

    def rules(self) -> List[str]:
        return [rule for _, rule in self.steps]

    def lines(self) -> List[str]:
        """One ``STEP n rule: program`` line per step."""
        return [
            f"STEP {n} {rule}: {print_program(program)}"
            for n, (program, rule) in enumerate(self.steps, start=1)
        ]


def normalize(
    pi: PiLike,
    p: Program,
    fuel: Optional[int] = None,
    *,
    audit: Optional[bool] = None,
    record: bool = True,
) -> StepTrace:
    """Reduce *p* until it is normal, stuck, or *fuel* steps have been taken.

    Parameters
    ----------
    pi:
        Neutral variables in scope.
    p:
        Functionally closed program.
    fuel:
        Step budget; defaults to ``PQA_FUEL``.
    audit:
        Run the determinism audit on every step.
    record:
        Keep every intermediate program.  With ``False`` the trace still
        lists the rule names, paired with the start program.

    Returns
    -------
    StepTrace
        Terminal status ``Normal``, ``FuelExhausted`` or ``Stuck``.
    """
    fuel = settings.PQA_FUEL if fuel is None else fuel
    if fuel <= 0:
        raise ValueError(f"fuel must be positive, got {fuel}")
    pi = NeutralContext.of(pi)
    fresh = FreshNames()
    trace = StepTrace(start=p)
    current = p
    for _ in range(fuel):
        try:
            reduct = step(pi, current, fresh=fresh, audit=audit)
        except DeterminismError:
            raise
        except DynamicsError as exc:
            logger.info("stuck after %d steps: %s", len(trace.steps), exc.message)
            trace.status = Stuck(current, exc)
            return trace
        if reduct is None:
            trace.status = Normal(current)
            return trace
        current = reduct.program
        logger.debug("step %d %s", len(trace.steps) + 1, reduct.rule)
        trace.steps.append((current if record else p, reduct.rule))
    try:
        done = is_normal(pi, current)
    except DynamicsError as exc:
        trace.status = Stuck(current, exc)
        return trace
    if done:
        trace.status = Normal(current)
    else:
        logger.warning("fuel exhausted after %d steps", fuel)
        trace.status = FuelExhausted(current)
    return trace


def halts(pi: PiLike, p: Program, fuel: Optional[int] = None) -> bool:
    """The ``halts`` judgment, bounded by *fuel*."""
    return normalize(pi, p, fuel, record=False).is_normal
