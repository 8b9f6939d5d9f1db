"""Metatheory properties run over a stream of generated programs.

Each program gets its own random stream, derived from the suite seed and
its index, so any counterexample is reproduced by ``(seed, index)``
alone and the stream can be cut into shards that run in separate
processes.  Shard reports merge commutatively.
"""

from __future__ import annotations

import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import reduce
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from pqa.circuit.grammar import check_normal_grammar
from pqa.config import settings
from pqa.dynamics.classify import is_normal
from pqa.dynamics.context import TypedNeutralContext, cneu
from pqa.dynamics.neutral import apply_neutral_subst, check_neutral_subst
from pqa.dynamics.normalize import FuelExhausted, Normal, StepTrace, Stuck, normalize
from pqa.dynamics.reduce import step
from pqa.errors import DeterminismError, GenerationError, PqaError
from pqa.harness.generator import GenConfig, Path, Site, generate, sample_case
from pqa.harness.mutate import mutate
from pqa.harness.oracle import brute_force_split_check
from pqa.harness.shrink import shrink
from pqa.statics.checker import CheckReport, check_pqa, check_pqx
from pqa.statics.context import TypingContext
from pqa.syntax.names import all_names, alpha_eq
from pqa.syntax.printer import print_program
from pqa.syntax.signature import Signature
from pqa.syntax.terms import App, C, F, Force, Gate, Program, Var
from pqa.syntax.types import Mode, TypeExpr, Up, mode_of, print_type

logger = logging.getLogger(__name__)

MAX_COUNTEREXAMPLES = 5
GENERATION_ATTEMPTS = 3
MUTANT_FUEL = 2_000
NEUTRAL_PREFIX = 12


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass
class Counterexample:
    """A failing program, reproducible from ``seed`` and ``index``."""

    seed: int
    index: int
    program: str
    message: str
    shrink_steps: int = 0


@dataclass
class PropertyResult:
    name: str
    statement: str
    attempted: int = 0
    passed: int = 0
    failed: int = 0
    counterexamples: List[Counterexample] = field(default_factory=list)

    def merge(self, other: "PropertyResult") -> "PropertyResult":
        examples = sorted(
            self.counterexamples + other.counterexamples, key=lambda c: (c.seed, c.index)
        )
        return PropertyResult(
            self.name,
            self.statement,
            self.attempted + other.attempted,
            self.passed + other.passed,
            self.failed + other.failed,
            examples[:MAX_COUNTEREXAMPLES],
        )


@dataclass
class SuiteReport:
    seed: int
    count: int
    max_depth: int
    properties: Dict[str, PropertyResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(result.failed == 0 for result in self.properties.values())

    @property
    def failures(self) -> int:
        return sum(result.failed for result in self.properties.values())

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        merged = dict(self.properties)
        for name, result in other.properties.items():
            merged[name] = merged[name].merge(result) if name in merged else result
        return SuiteReport(self.seed, self.count + other.count, self.max_depth, merged)

    def to_dict(self) -> Dict[str, object]:
        return {
            "seed": self.seed,
            "count": self.count,
            "max_depth": self.max_depth,
            "ok": self.ok,
            "properties": {name: asdict(result) for name, result in self.properties.items()},
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    def summary_lines(self) -> List[str]:
        lines = []
        for r in self.properties.values():
            line = f"{r.name}: {r.passed}/{r.attempted} passed"
            lines.append(line + (f", {r.failed} FAILED" if r.failed else ""))
        return lines


# ---------------------------------------------------------------------------
# Cases
# ---------------------------------------------------------------------------


class _Skip(Exception):
    """The property does not apply to this case."""


@dataclass
class _Case:
    seed: int
    index: int
    program: Program
    goal: TypeExpr
    ctx: TypingContext
    sig: Signature
    fuel: int
    sites: Mapping[Path, Site] = field(default_factory=dict)
    _typed: Optional[CheckReport] = None
    _trace: Optional[StepTrace] = None
    _overlap: Optional[DeterminismError] = None

    @property
    def psi(self) -> TypedNeutralContext:
        return TypedNeutralContext(tuple((n, t) for n, t in self.ctx if mode_of(t) is Mode.Q))

    @property
    def pi(self):
        return cneu(self.psi)

    def rng(self, purpose: str) -> random.Random:
        return random.Random(f"{self.seed}:{self.index}:{purpose}")

    def with_program(self, program: Program) -> "_Case":
        return _Case(self.seed, self.index, program, self.goal, self.ctx, self.sig, self.fuel)

    def typed(self) -> CheckReport:
        if self._typed is None:
            self._typed = check_pqa(self.sig, self.ctx, self.program, self.goal, audit=True)
        return self._typed

    def require_typed(self) -> None:
        if not self.typed().ok:
            raise _Skip()

    def overlap(self) -> Optional[DeterminismError]:
        self.trace_or_none()
        return self._overlap

    def trace_or_none(self) -> Optional[StepTrace]:
        if self._trace is None and self._overlap is None:
            try:
                self._trace = normalize(self.pi, self.program, self.fuel, audit=True)
            except DeterminismError as exc:
                self._overlap = exc
                # the trace-based properties still run, on the table-order trace
                self._trace = normalize(self.pi, self.program, self.fuel, audit=False)
        return self._trace

    def trace(self) -> StepTrace:
        self.require_typed()
        trace = self.trace_or_none()
        if trace is None:
            raise _Skip()
        return trace

    def normal_form(self) -> Program:
        trace = self.trace()
        if not isinstance(trace.status, Normal):
            raise _Skip()
        return trace.status.program


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------


def _generator_soundness(case: _Case) -> Optional[str]:
    report = case.typed()
    return None if report.ok else f"generated program rejected: {report.describe()}"


def _independence(case: _Case) -> Optional[str]:
    case.require_typed()
    bad = case.typed().independence_violations()
    if not bad:
        return None
    first = bad[0]
    modes = ", ".join(str(m) for m in first.consumed_modes)
    return f"node {first.path} at mode {first.mode} depends on bindings at modes {modes}"


def _pqa_in_pqx(case: _Case) -> Optional[str]:
    case.require_typed()
    report = check_pqx(case.sig, case.ctx, case.program, case.goal)
    return None if report.ok else f"structural checker rejects: {report.describe()}"


def _finality(case: _Case) -> Optional[str]:
    trace = case.trace()
    for n, q in enumerate(trace.programs[:-1]):
        if is_normal(case.pi, q):
            return f"normal program stepped at step {n + 1}: {print_program(q)}"
    if trace.is_normal and step(case.pi, trace.result) is not None:
        return "final program still steps"
    return None


def _determinism(case: _Case) -> Optional[str]:
    case.require_typed()
    overlap = case.overlap()
    return None if overlap is None else overlap.message


def _progress(case: _Case) -> Optional[str]:
    status = case.trace().status
    if isinstance(status, Stuck):
        return f"stuck: {status.error.message}: {print_program(status.program)}"
    return None


def _subject_reduction(checker: Callable[..., CheckReport]) -> Callable[[_Case], Optional[str]]:
    def check(case: _Case) -> Optional[str]:
        trace = case.trace()
        for n, (q, rule) in enumerate(trace.steps, start=1):
            report = checker(case.sig, case.ctx, q, case.goal)
            if not report.ok:
                return f"step {n} ({rule}) loses the type: {report.describe()}"
        return None

    return check


def _normalization(case: _Case) -> Optional[str]:
    status = case.trace().status
    if isinstance(status, FuelExhausted):
        return f"no normal form within {case.fuel} steps"
    return None


def _force_halts(case: _Case) -> Optional[str]:
    nf = case.normal_form()
    match case.goal:
        case Up(inner=inner, lower=Mode.Q):
            forced = Force(nf, C)
        case Up(inner=inner, lower=Mode.L):
            forced = Force(nf, F)
        case _:
            raise _Skip()
    trace = normalize(case.pi, forced, case.fuel)
    if not trace.is_normal:
        return f"forcing the value does not halt: {type(trace.status).__name__}"
    report = check_normal_grammar(inner, case.psi, trace.result, case.sig)
    return None if report.conforms else report.describe()


def _normal_forms(case: _Case) -> Optional[str]:
    nf = case.normal_form()
    report = check_normal_grammar(case.goal, case.psi, nf, case.sig)
    return None if report.conforms else report.describe()


def _neutral_substitution(case: _Case) -> Optional[str]:
    phi = case.psi
    if not len(phi):
        raise _Skip()
    programs = case.trace().programs[:NEUTRAL_PREFIX]
    rng = case.rng("neutral")
    avoid = set(case.ctx.names()).union(*(all_names(q) for q in programs))
    sigma: Dict[str, Program] = {}
    bindings: List[Tuple[str, TypeExpr]] = []
    counter = 0
    for name, ty in phi:
        while f"y{counter}" in avoid:
            counter += 1
        fresh = f"y{counter}"
        avoid.add(fresh)
        image: Program = Var(fresh, C)
        gates = sorted(g for g, t in case.sig.gates.items() if t.dom == ty and t.cod == ty)
        if gates and rng.random() < 0.5:
            image = App(Gate(rng.choice(gates)), image, C)
        sigma[name] = image
        bindings.append((fresh, ty))
    psi = TypedNeutralContext(tuple(bindings))
    check_neutral_subst(case.sig, psi, sigma, phi)
    for n, q in enumerate(programs):
        image = apply_neutral_subst(sigma, q)
        if is_normal(cneu(phi), q) and not is_normal(cneu(psi), image):
            return f"substitution breaks normality at step {n}: {print_program(image)}"
        before = step(cneu(phi), q)
        if before is None:
            continue
        after = step(cneu(psi), image)
        expected = apply_neutral_subst(sigma, before.program)
        if after is None or not alpha_eq(after.program, expected):
            return f"substitution does not commute with {before.rule} at step {n}"
    return None


def _oracle_equivalence(case: _Case) -> Optional[str]:
    if len(case.ctx.linear()) > settings.PQA_ORACLE_MAX_LINEAR:
        raise _Skip()
    mutant = mutate(case.program, case.rng("oracle"), case.sig)
    for label, q in (("program", case.program), ("mutant", mutant)):
        fast = check_pqa(case.sig, case.ctx, q, case.goal).ok
        slow = brute_force_split_check(case.ctx, q, case.goal, case.sig)
        if fast != slow:
            return f"{label}: check_pqa says {fast}, split enumeration says {slow}"
    return None


def _mutation_robustness(case: _Case) -> Optional[str]:
    mutant = mutate(case.program, case.rng("mutate"), case.sig)
    check_pqa(case.sig, case.ctx, mutant, case.goal)
    check_pqx(case.sig, case.ctx, mutant, case.goal)
    trace = normalize(case.pi, mutant, MUTANT_FUEL, audit=False, record=False)
    status = trace.status
    if isinstance(status, Stuck) and not status.error.message:
        return f"stuck without a diagnostic: {print_program(mutant)}"
    return None


@dataclass(frozen=True)
class Property:
    name: str
    statement: str
    check: Callable[[_Case], Optional[str]]


PROPERTIES: Tuple[Property, ...] = (
    Property(
        "generator soundness",
        "every generated program checks at its goal type",
        _generator_soundness,
    ),
    Property(
        "independence principle",
        "no subterm depends on a binding at a mode below its own",
        _independence,
    ),
    Property(
        "pqa ⊆ pqx",
        "every program of the linear system is accepted by the structural one",
        _pqa_in_pqx,
    ),
    Property("finality", "normal programs do not step", _finality),
    Property("determinism", "at most one reduction rule applies to any program", _determinism),
    Property("progress", "a well-typed program is normal or steps", _progress),
    Property(
        "subject reduction (pqa)",
        "reduction preserves the type in the linear system",
        _subject_reduction(check_pqa),
    ),
    Property(
        "subject reduction (pqx)",
        "reduction preserves the type in the structural system",
        _subject_reduction(check_pqx),
    ),
    Property("normalization", "every well-typed program reaches a normal form", _normalization),
    Property(
        "force halts",
        "forcing a normal suspension halts in a normal form of the suspended type",
        _force_halts,
    ),
    Property(
        "well-typed normal forms",
        "normal forms have the shape their type prescribes",
        _normal_forms,
    ),
    Property(
        "neutral substitution",
        "substituting neutral circuits for wires preserves normality and single steps",
        _neutral_substitution,
    ),
    Property(
        "oracle equivalence",
        "the leftover checker agrees with exhaustive context splitting",
        _oracle_equivalence,
    ),
    Property(
        "mutation robustness",
        "one-constructor mutants never crash the checkers or the stepper",
        _mutation_robustness,
    ),
)


def _evaluate(prop: Property, case: _Case) -> Tuple[bool, Optional[str]]:
    """``(attempted, failure)`` for one property on one case."""
    try:
        return True, prop.check(case)
    except _Skip:
        return False, None
    except PqaError as exc:
        return True, f"error[{exc.code}]: {exc.message}"
    except Exception as exc:
        logger.exception("property %s crashed on case %d", prop.name, case.index)
        return True, f"crash: {type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def _empty_report(cfg: GenConfig) -> SuiteReport:
    return SuiteReport(
        cfg.seed,
        0,
        cfg.max_depth,
        {p.name: PropertyResult(p.name, p.statement) for p in PROPERTIES},
    )


def _make_case(cfg: GenConfig, index: int, fuel: int) -> _Case:
    rng = random.Random(cfg.seed * 1_000_003 + index)
    last: Optional[GenerationError] = None
    for _ in range(GENERATION_ATTEMPTS):
        goal, ctx = sample_case(cfg, rng)
        try:
            generated = generate(cfg, goal, ctx, rng)
        except GenerationError as exc:
            logger.debug("case %d: %s", index, exc.message)
            last = exc
            continue
        return _Case(
            cfg.seed, index, generated.program, goal, ctx, cfg.gate_pool, fuel, generated.sites
        )
    raise last


def _record_failure(result: PropertyResult, prop: Property, case: _Case, message: str) -> None:
    result.failed += 1
    logger.warning("%s failed on case %d: %s", prop.name, case.index, message)
    if len(result.counterexamples) >= MAX_COUNTEREXAMPLES:
        return
    shrunk = shrink(
        case.program,
        case.goal,
        case.ctx,
        lambda q: _evaluate(prop, case.with_program(q))[1] is not None,
        case.sites,
    )
    final = _evaluate(prop, case.with_program(shrunk.program))[1] or message
    result.counterexamples.append(
        Counterexample(case.seed, case.index, print_program(shrunk.program), final, shrunk.steps)
    )


def run_case(cfg: GenConfig, index: int, report: SuiteReport, fuel: int) -> None:
    """Run every property on program number *index* and tally into *report*."""
    report.count += 1
    try:
        case = _make_case(cfg, index, fuel)
    except GenerationError as exc:
        result = report.properties["generator soundness"]
        result.attempted += 1
        result.failed += 1
        if len(result.counterexamples) < MAX_COUNTEREXAMPLES:
            result.counterexamples.append(Counterexample(cfg.seed, index, "", exc.message))
        return
    logger.debug("case %d: %s at %s", index, print_program(case.program), print_type(case.goal))
    for prop in PROPERTIES:
        attempted, failure = _evaluate(prop, case)
        if not attempted:
            continue
        result = report.properties[prop.name]
        result.attempted += 1
        if failure is None:
            result.passed += 1
        else:
            _record_failure(result, prop, case, failure)


def _run_shard(cfg: GenConfig, indices: Sequence[int], fuel: int) -> SuiteReport:
    report = _empty_report(cfg)
    for index in indices:
        run_case(cfg, index, report, fuel)
    return report


def run_suite(
    cfg: GenConfig, count: int, jobs: int = 1, fuel: Optional[int] = None
) -> SuiteReport:
    """Generate *count* programs and run every property on each.

    Parameters
    ----------
    cfg:
        Generator configuration; ``cfg.seed`` fixes the whole run.
    count:
        Number of programs, at least 1.
    jobs:
        Worker processes; program ``i`` goes to shard ``i mod jobs``.
    fuel:
        Normalization budget per program, defaults to ``PQA_FUEL``.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, got {jobs}")
    fuel = settings.PQA_FUEL if fuel is None else fuel
    logger.info("suite started: %d programs, depth %d, seed %d", count, cfg.max_depth, cfg.seed)
    if jobs == 1:
        report = _run_shard(cfg, range(count), fuel)
    else:
        shards = [range(j, count, jobs) for j in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_shard, [cfg] * jobs, shards, [fuel] * jobs))
        report = reduce(SuiteReport.merge, parts)
    logger.info(
        "suite finished: %d programs, %d failures in %d properties",
        report.count,
        report.failures,
        sum(1 for r in report.properties.values() if r.failed),
    )
    return report
