"""Derivation-directed generation of well-typed programs.

Generation follows the typing rules backwards.  For a goal type and a
linear context that must be consumed exactly, the generator either picks
a weighted "enrichment" rule (a redex-creating cut, a gate, a variable)
or falls back to the structural rules: eliminate pattern-matchable
bindings first, then introduce the goal's constructor.  The structural
fallback always succeeds when the number of qubits carried by the
context equals the number carried by the goal, which is the one
invariant every split maintains.  Gates in the pool are restricted to
qubit-count preserving ones so that invariant holds.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from pqa.encoding.stdlib import stdlib_signature
from pqa.errors import GenerationError
from pqa.statics.context import TypingContext
from pqa.syntax.names import all_names
from pqa.syntax.signature import Signature
from pqa.syntax.terms import (
    App,
    C,
    DownIntro,
    F,
    Family,
    Force,
    Gate,
    Lam,
    Match,
    Pair,
    PDown,
    PPair,
    Program,
    PUnit,
    SuspCirc,
    SuspTerm,
    Unit,
    Var,
    positions,
    subterm_at,
)
from pqa.syntax.types import (
    QUBIT,
    Arrow,
    Down,
    Mode,
    Qubit,
    Tensor,
    TypeExpr,
    UnitAt,
    Up,
    is_simple,
    mode_of,
    print_type,
)

logger = logging.getLogger(__name__)

Binding = Tuple[str, TypeExpr]
Bindings = Tuple[Binding, ...]
Path = Tuple[int, ...]

MAX_TRIES = 6

DEFAULT_WEIGHTS: Mapping[str, int] = {
    "structural": 4,
    "var": 3,
    "force_var": 1,
    "beta": 2,
    "force_susp": 1,
    "pair_match": 2,
    "circval_gate": 2,
    "gate1": 3,
    "bare_gate": 2,
    "gate2": 1,
    "gate2_match": 3,
    "force_circ": 1,
    "circuit_beta": 1,
}

QQ_PAIR = Tensor(QUBIT, QUBIT, Mode.Q)


def _default_bias() -> Dict[Mode, float]:
    return {Mode.U: 1.0, Mode.L: 2.0, Mode.Q: 1.0}


@dataclass(frozen=True)
class GenConfig:
    """Knobs of the program generator."""

    seed: int = 0
    max_depth: int = 8
    mode_bias: Mapping[Mode, float] = field(default_factory=_default_bias)
    gate_pool: Signature = field(default_factory=stdlib_signature)
    weights: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be at least 1, got {self.max_depth}")
        if any(w < 0 for w in self.mode_bias.values()) or any(
            w < 0 for w in self.weights.values()
        ):
            raise ValueError("generator weights must be nonnegative")


@dataclass(frozen=True)
class Site:
    """Where a subprogram was generated: its goal and the bindings it could use."""

    goal: TypeExpr
    linear: Bindings
    unrestricted: Bindings


@dataclass
class Generated:
    program: Program
    goal: TypeExpr
    ctx: TypingContext
    sites: Dict[Path, Site] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Qubit counting
# ---------------------------------------------------------------------------


def charge(ty: TypeExpr) -> int:
    """Net number of qubits a value of *ty* carries."""
    match ty:
        case UnitAt():
            return 0
        case Qubit():
            return 1
        case Tensor(left=a, right=b):
            return charge(a) + charge(b)
        case Arrow(dom=a, cod=b):
            return charge(b) - charge(a)
        case Up(inner=a) | Down(inner=a):
            return charge(a)
    raise TypeError(f"not a type: {ty!r}")


def _total(bindings: Bindings) -> int:
    return sum(charge(t) for _, t in bindings)


def _without(bindings: Bindings, *names: str) -> Bindings:
    return tuple(b for b in bindings if b[0] not in names)


# ---------------------------------------------------------------------------
# Random types
# ---------------------------------------------------------------------------


def random_simple(rng: random.Random, n: int) -> TypeExpr:
    """A wire-bundle type carrying exactly *n* qubits."""
    if n == 0:
        return UnitAt(Mode.Q)
    if n == 1:
        return QUBIT if rng.random() < 0.85 else Tensor(QUBIT, UnitAt(Mode.Q), Mode.Q)
    k = rng.randint(1, n - 1)
    return Tensor(random_simple(rng, k), random_simple(rng, n - k), Mode.Q)


def random_data(rng: random.Random, mode: Mode, n: int, depth: int) -> TypeExpr:
    """A first-order type at *mode* (``l`` or ``u``) carrying *n* qubits."""
    if mode is Mode.U:
        if n:
            raise GenerationError("mode-u values carry no qubits")
        roll = rng.random()
        if depth <= 0 or roll < 0.5:
            return UnitAt(Mode.U)
        if roll < 0.75:
            return Tensor(
                random_data(rng, mode, 0, depth - 1), random_data(rng, mode, 0, depth - 1), mode
            )
        return Up(random_goal(rng, Mode.L, 0, depth - 1), Mode.L, Mode.U)
    roll = rng.random()
    if n == 0 and (depth <= 0 or roll < 0.4):
        return UnitAt(Mode.L)
    if depth <= 0 or roll < 0.7:
        return Up(random_simple(rng, n), Mode.Q, Mode.L)
    if n == 0 and roll < 0.85:
        return Down(random_data(rng, Mode.U, 0, depth - 1))
    k = rng.randint(0, n)
    return Tensor(
        random_data(rng, mode, k, depth - 1), random_data(rng, mode, n - k, depth - 1), mode
    )


def random_goal(rng: random.Random, mode: Mode, n: int, depth: int) -> TypeExpr:
    """A goal type at *mode* carrying *n* qubits; functions appear only positively."""
    if mode is Mode.Q:
        return random_simple(rng, n)
    if mode is Mode.U:
        roll = rng.random()
        if depth <= 0 or roll < 0.25:
            return UnitAt(Mode.U)
        if roll < 0.45:
            return Tensor(
                random_goal(rng, mode, 0, depth - 1), random_goal(rng, mode, 0, depth - 1), mode
            )
        if roll < 0.7:
            return Arrow(
                random_data(rng, mode, 0, depth - 1), random_goal(rng, mode, 0, depth - 1), mode
            )
        return Up(random_goal(rng, Mode.L, 0, depth - 1), Mode.L, Mode.U)
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        return random_data(rng, mode, n, depth)
    if roll < 0.6:
        k = rng.randint(0, 2)
        return Arrow(
            random_data(rng, mode, k, depth - 1), random_goal(rng, mode, n + k, depth - 1), mode
        )
    if roll < 0.8:
        k = rng.randint(0, 2)
        return Up(Arrow(random_simple(rng, k), random_simple(rng, k + n), Mode.Q), Mode.Q, Mode.L)
    k = rng.randint(0, n)
    return Tensor(
        random_goal(rng, mode, k, depth - 1), random_goal(rng, mode, n - k, depth - 1), mode
    )


def sample_case(cfg: GenConfig, rng: random.Random) -> Tuple[TypeExpr, TypingContext]:
    """Pick a goal and context according to ``cfg.mode_bias``.

    Functional goals come with an empty context.  Circuit goals come with
    a context of circuit variables, so the program is an open circuit.
    """
    modes = [m for m in (Mode.U, Mode.L, Mode.Q) if cfg.mode_bias.get(m, 0) > 0]
    if not modes:
        raise GenerationError("mode_bias gives every mode weight zero")
    mode = rng.choices(modes, weights=[cfg.mode_bias[m] for m in modes])[0]
    type_depth = min(3, cfg.max_depth)
    if mode is not Mode.Q:
        return random_goal(rng, mode, 0, type_depth), TypingContext()
    wires = [random_simple(rng, rng.randint(0, 2)) for _ in range(rng.randint(1, 3))]
    ctx = TypingContext(tuple((f"w{i}", ty) for i, ty in enumerate(wires)))
    goal = random_simple(rng, sum(charge(t) for t in wires))
    return goal, ctx


# ---------------------------------------------------------------------------
# Generator
# ---------------------------------------------------------------------------

Rule = Callable[[TypeExpr, Bindings, Bindings, int], Program]


class _Generator:
    def __init__(self, cfg: GenConfig, rng: random.Random, taken: Set[str] = frozenset()) -> None:
        self.cfg = cfg
        self.rng = rng
        self.taken = set(taken)
        self._counter = itertools.count(1)
        self.records: Dict[int, Tuple[Program, Site]] = {}
        gates = cfg.gate_pool.gates
        self.one_qubit = sorted(g for g, t in gates.items() if t.dom == QUBIT and t.cod == QUBIT)
        self.two_qubit = sorted(
            g for g, t in gates.items() if t.dom == QQ_PAIR and t.cod == QQ_PAIR
        )

    # -- helpers --------------------------------------------------------------

    def fresh(self, base: str) -> str:
        name = f"{base}{next(self._counter)}"
        while name in self.taken:
            name = f"{base}{next(self._counter)}"
        self.taken.add(name)
        return name

    def _record(self, p: Program, site: Site) -> Program:
        self.records[id(p)] = (p, site)
        return p

    def _pick_subset(self, bindings: Bindings) -> Tuple[Bindings, Bindings]:
        chosen = tuple(b for b in bindings if self.rng.random() < 0.5)
        names = {n for n, _ in chosen}
        return chosen, tuple(b for b in bindings if b[0] not in names)

    def _split_atoms(self, bindings: Bindings, k: int) -> Tuple[Bindings, Bindings]:
        if len(bindings) < k:
            raise GenerationError("not enough wires to split")
        chosen = set(self.rng.sample(range(len(bindings)), k))
        left = tuple(b for i, b in enumerate(bindings) if i in chosen)
        right = tuple(b for i, b in enumerate(bindings) if i not in chosen)
        return left, right

    def _choose(self, rules: List[Tuple[str, Rule]], goal, lin, unr, depth) -> Program:
        weights = self.cfg.weights
        pool = [(name, rule) for name, rule in rules if weights.get(name, 0) > 0]
        fallback = dict(rules).get("structural")
        for _ in range(MAX_TRIES):
            if not pool:
                break
            index = self.rng.choices(range(len(pool)), [weights[n] for n, _ in pool])[0]
            name, rule = pool[index]
            try:
                return rule(goal, lin, unr, depth)
            except GenerationError as exc:
                logger.debug("rule %s failed at %s: %s", name, print_type(goal), exc.message)
                pool.pop(index)
        if fallback is None:
            raise GenerationError(f"no rule builds {print_type(goal)}")
        return fallback(goal, lin, unr, depth)

    # -- entry --------------------------------------------------------------------

    def term(self, goal: TypeExpr, lin: Bindings, unr: Bindings, depth: int) -> Program:
        if _total(lin) != charge(goal):
            raise GenerationError(
                f"{_total(lin)} qubits in scope cannot make a {print_type(goal)}"
            )
        site = Site(goal, lin, unr)
        if mode_of(goal) is Mode.Q:
            rules = self._circuit_rules(goal, lin, unr, depth)
        else:
            rules = self._functional_rules(goal, lin, unr, depth)
        return self._record(self._choose(rules, goal, lin, unr, depth), site)

    # -- functional rules ---------------------------------------------------------

    def _functional_rules(self, goal, lin, unr, depth) -> List[Tuple[str, Rule]]:
        rules: List[Tuple[str, Rule]] = [("structural", self._f_structural)]
        if depth <= 1:
            return rules
        mode = mode_of(goal)
        if (len(lin) == 1 and lin[0][1] == goal) or (not lin and any(t == goal for _, t in unr)):
            rules.append(("var", self._var))
        if not lin and mode is Mode.L:
            rules.append(("force_susp", self._force_susp))
            if any(t == Up(goal, Mode.L, Mode.U) for _, t in unr):
                rules.append(("force_var", self._force_var))
        rules.append(("beta", self._beta))
        rules.append(("pair_match", self._pair_match))
        if mode is Mode.L and self.two_qubit and len(self._atoms(lin)) >= 2:
            rules.append(("circval_gate", self._circval_gate))
        return rules

    def _f_structural(self, goal, lin, unr, depth) -> Program:
        victims = [b for b in lin if self._eliminable(b[1], circuit=False)]
        if victims:
            return self._eliminate(self.rng.choice(victims), goal, lin, unr, depth, circuit=False)
        match goal:
            case UnitAt():
                self._require_empty(lin, goal)
                return Unit(F)
            case Tensor(left=a, right=b):
                left, right = self._split_atoms(lin, charge(a))
                return Pair(
                    self.term(a, left, unr, depth - 1), self.term(b, right, unr, depth - 1), F
                )
            case Arrow(dom=a, cod=b):
                y = self.fresh("x")
                if mode_of(a) is Mode.U:
                    body = self.term(b, lin, unr + ((y, a),), depth - 1)
                else:
                    body = self.term(b, lin + ((y, a),), unr, depth - 1)
                return Lam(y, body, F, a)
            case Up(inner=a, lower=Mode.Q):
                return SuspCirc(self.term(a, lin, unr, depth - 1))
            case Up(inner=a):
                self._require_empty(lin, goal)
                return SuspTerm(self.term(a, (), unr, depth - 1))
            case Down(inner=a):
                self._require_empty(lin, goal)
                return DownIntro(self.term(a, (), unr, depth - 1))
        raise GenerationError(f"cannot build a term of type {print_type(goal)}")

    def _var(self, goal, lin, unr, depth) -> Program:
        if lin:
            return Var(lin[0][0], F)
        return Var(self.rng.choice([n for n, t in unr if t == goal]), F)

    def _force_var(self, goal, lin, unr, depth) -> Program:
        names = [n for n, t in unr if t == Up(goal, Mode.L, Mode.U)]
        return Force(Var(self.rng.choice(names), F), F)

    def _force_susp(self, goal, lin, unr, depth) -> Program:
        return Force(SuspTerm(self.term(goal, (), unr, depth - 1)), F)

    def _beta(self, goal, lin, unr, depth) -> Program:
        mode = mode_of(goal)
        arg_lin, body_lin = self._pick_subset(lin) if mode is Mode.L else ((), lin)
        dom = random_data(self.rng, mode, _total(arg_lin), 2)
        y = self.fresh("x")
        if mode is Mode.U:
            body = self.term(goal, body_lin, unr + ((y, dom),), depth - 1)
        else:
            body = self.term(goal, body_lin + ((y, dom),), unr, depth - 1)
        arg = self.term(dom, arg_lin, unr, depth - 1)
        return App(Lam(y, body, F, dom), arg, F)

    def _pair_match(self, goal, lin, unr, depth) -> Program:
        mode = mode_of(goal)
        first, rest = self._pick_subset(lin) if mode is Mode.L else ((), lin)
        second, rest = self._pick_subset(rest) if mode is Mode.L else ((), rest)
        a_ty = random_data(self.rng, mode, _total(first), 2)
        b_ty = random_data(self.rng, mode, _total(second), 2)
        a, b = self.fresh("x"), self.fresh("x")
        scrutinee = Pair(
            self.term(a_ty, first, unr, depth - 1), self.term(b_ty, second, unr, depth - 1), F
        )
        if mode is Mode.U:
            body = self.term(goal, rest, unr + ((a, a_ty), (b, b_ty)), depth - 1)
        else:
            body = self.term(goal, rest + ((a, a_ty), (b, b_ty)), unr, depth - 1)
        return Match(scrutinee, PPair(a, b, body, Family.FF))

    def _circval_gate(self, goal, lin, unr, depth) -> Program:
        return self._gate_match(goal, lin, unr, depth, Family.QF)

    # -- circuit rules --------------------------------------------------------------

    def _circuit_rules(self, goal, lin, unr, depth) -> List[Tuple[str, Rule]]:
        rules: List[Tuple[str, Rule]] = [("structural", self._c_structural)]
        if depth <= 1:
            return rules
        if isinstance(goal, Arrow):
            if not lin and goal in self.cfg.gate_pool.gates.values():
                rules.append(("bare_gate", self._bare_gate))
            return rules
        if goal == QUBIT and self.one_qubit:
            rules.append(("gate1", self._gate1))
        if goal == QQ_PAIR and self.two_qubit:
            rules.append(("gate2", self._gate2))
        if self.two_qubit and len(self._atoms(lin)) >= 2:
            rules.append(("gate2_match", self._gate2_match))
        rules.append(("force_circ", self._force_circ))
        rules.append(("circuit_beta", self._circuit_beta))
        return rules

    def _c_structural(self, goal, lin, unr, depth) -> Program:
        victims = [b for b in lin if self._eliminable(b[1], circuit=True)]
        if victims:
            return self._eliminate(self.rng.choice(victims), goal, lin, unr, depth, circuit=True)
        for name, ty in lin:
            if not self._is_atom(ty):
                raise GenerationError(f"{name} : {print_type(ty)} cannot be used in a circuit")
        match goal:
            case Arrow(dom=a, cod=b):
                y = self.fresh("q")
                return Lam(y, self.term(b, lin + ((y, a),), unr, depth - 1), C, a)
            case UnitAt():
                self._require_empty(lin, goal)
                return Unit(C)
            case Qubit():
                if len(lin) != 1:
                    raise GenerationError(f"a qubit needs exactly one wire, got {len(lin)}")
                return self._resource(lin[0])
            case Tensor(left=a, right=b):
                left, right = self._split_atoms(lin, charge(a))
                return Pair(
                    self.term(a, left, unr, depth - 1), self.term(b, right, unr, depth - 1), C
                )
        raise GenerationError(f"cannot build a circuit of type {print_type(goal)}")

    def _bare_gate(self, goal, lin, unr, depth) -> Program:
        names = sorted(g for g, t in self.cfg.gate_pool.gates.items() if t == goal)
        return Gate(self.rng.choice(names))

    def _gate1(self, goal, lin, unr, depth) -> Program:
        return App(Gate(self.rng.choice(self.one_qubit)), self.term(goal, lin, unr, depth - 1), C)

    def _gate2(self, goal, lin, unr, depth) -> Program:
        return App(Gate(self.rng.choice(self.two_qubit)), self.term(goal, lin, unr, depth - 1), C)

    def _gate2_match(self, goal, lin, unr, depth) -> Program:
        return self._gate_match(goal, lin, unr, depth, Family.QQ)

    def _force_circ(self, goal, lin, unr, depth) -> Program:
        return Force(SuspCirc(self.term(goal, lin, unr, depth - 1)), C)

    def _circuit_beta(self, goal, lin, unr, depth) -> Program:
        arg_lin, body_lin = self._pick_subset(lin)
        dom = random_simple(self.rng, _total(arg_lin))
        y = self.fresh("q")
        body = self.term(goal, body_lin + ((y, dom),), unr, depth - 1)
        arg = self.term(dom, arg_lin, unr, depth - 1)
        return App(Lam(y, body, C, dom), arg, C)

    # -- shared -----------------------------------------------------------------------

    def _gate_match(self, goal, lin, unr, depth, family: Family) -> Program:
        atoms = self._atoms(lin)
        r1, r2 = self.rng.sample(atoms, 2)
        rest = _without(lin, r1[0], r2[0])
        a, b = self.fresh("q"), self.fresh("q")
        body = self.term(goal, rest + ((a, QUBIT), (b, QUBIT)), unr, depth - 1)
        gate = Gate(self.rng.choice(self.two_qubit))
        scrutinee = App(gate, Pair(self._resource(r1), self._resource(r2), C), C)
        return Match(scrutinee, PPair(a, b, body, family))

    @staticmethod
    def _is_atom(ty: TypeExpr) -> bool:
        return ty == QUBIT or ty == Up(QUBIT, Mode.Q, Mode.L)

    def _atoms(self, lin: Bindings) -> List[Binding]:
        return [b for b in lin if self._is_atom(b[1])]

    @staticmethod
    def _resource(binding: Binding) -> Program:
        name, ty = binding
        if ty == QUBIT:
            return Var(name, C)
        return Force(Var(name, F), C)

    @staticmethod
    def _require_empty(lin: Bindings, goal: TypeExpr) -> None:
        if lin:
            names = ", ".join(n for n, _ in lin)
            raise GenerationError(f"{print_type(goal)} cannot consume {names}")

    @staticmethod
    def _eliminable(ty: TypeExpr, *, circuit: bool) -> bool:
        match ty:
            case UnitAt(mode=Mode.Q) | Tensor(mode=Mode.Q):
                return True
            case Up(inner=inner, lower=Mode.Q):
                return inner != QUBIT and is_simple(inner)
            case UnitAt(mode=Mode.L) | Tensor(mode=Mode.L) | Down():
                return not circuit
        return False

    def _eliminate(self, victim: Binding, goal, lin, unr, depth, *, circuit: bool) -> Program:
        x, ty = victim
        rest = _without(lin, x)
        quantum = Family.QQ if circuit else Family.QF
        match ty:
            case UnitAt(mode=Mode.L):
                return Match(Var(x, F), PUnit(self.term(goal, rest, unr, depth), Family.FF))
            case Tensor(left=a, right=b, mode=Mode.L):
                y, z = self.fresh("x"), self.fresh("x")
                body = self.term(goal, rest + ((y, a), (z, b)), unr, depth)
                return Match(Var(x, F), PPair(y, z, body, Family.FF))
            case Down(inner=a):
                y = self.fresh("x")
                body = self.term(goal, rest, unr + ((y, a),), depth)
                return Match(Var(x, F), PDown(y, body))
            case Up(inner=inner):
                scrutinee, wires = Force(Var(x, F), C), inner
            case _:
                scrutinee, wires = Var(x, C), ty
        if isinstance(wires, UnitAt):
            return Match(scrutinee, PUnit(self.term(goal, rest, unr, depth), quantum))
        if isinstance(wires, Tensor):
            y, z = self.fresh("q"), self.fresh("q")
            body = self.term(goal, rest + ((y, wires.left), (z, wires.right)), unr, depth)
            return Match(scrutinee, PPair(y, z, body, quantum))
        raise GenerationError(f"cannot eliminate {x} : {print_type(ty)}")


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def _split_context(ctx: TypingContext) -> Tuple[Bindings, Bindings]:
    lin = tuple(b for b in ctx if mode_of(b[1]) is not Mode.U)
    unr = tuple(b for b in ctx if mode_of(b[1]) is Mode.U)
    return lin, unr


def generate(
    cfg: GenConfig,
    goal: TypeExpr,
    ctx: Optional[TypingContext] = None,
    rng: Optional[random.Random] = None,
    *,
    depth: Optional[int] = None,
    taken: Sequence[str] = (),
) -> Generated:
    """Generate a program at *goal* and remember the site of every subprogram.

    Raises
    ------
    GenerationError
        When the qubits carried by *ctx* cannot make a *goal*.
    """
    ctx = ctx if ctx is not None else TypingContext()
    rng = rng if rng is not None else random.Random(cfg.seed)
    gen = _Generator(cfg, rng, set(ctx.names()) | set(taken))
    lin, unr = _split_context(ctx)
    program = gen.term(goal, lin, unr, cfg.max_depth if depth is None else depth)
    sites: Dict[Path, Site] = {}
    for path in positions(program):
        record = gen.records.get(id(subterm_at(program, path)))
        if record is not None and record[0] is subterm_at(program, path):
            sites[path] = record[1]
    return Generated(program, goal, ctx, sites)


def gen_well_typed(
    cfg: GenConfig,
    goal: TypeExpr,
    ctx: Optional[TypingContext] = None,
    rng: Optional[random.Random] = None,
) -> Program:
    """A program that checks at *goal* under *ctx*."""
    return generate(cfg, goal, ctx, rng).program


def minimal_term(cfg: GenConfig, site: Site, avoid: Program) -> Program:
    """The structural term for *site*, with binders fresh for *avoid*."""
    gen = _Generator(cfg, random.Random(0), all_names(avoid))
    return gen.term(site.goal, site.linear, site.unrestricted, 1)
