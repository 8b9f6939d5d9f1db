import json
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import pqa.harness.suite as suite_module
from pqa.encoding.stdlib import stdlib_signature
from pqa.errors import DeterminismError, GenerationError, OracleLimitError
from pqa.harness import (
    MUTATIONS,
    PROPERTIES,
    GenConfig,
    Site,
    brute_force_split_check,
    charge,
    gen_well_typed,
    generate,
    minimal_term,
    mutate,
    run_suite,
    sample_case,
    shrink,
)
from pqa.statics.checker import check_pqa
from pqa.statics.context import TypingContext
from pqa.syntax.names import all_names
from pqa.syntax.parser import parse_program
from pqa.syntax.terms import size, subterm_at
from pqa.syntax.types import QUBIT, Mode, UnitAt, mode_of
from tests.helpers import SAMPLES, prog, ty


def sample(name):
    return parse_program((SAMPLES / name).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Generator
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, expected",
    [
        ("unit@l", 0),
        ("qubit", 1),
        ("qubit * (qubit * unit@q @q) @q", 2),
        ("qubit -o qubit * qubit @q @q", 1),
        ("Up (qubit * qubit @q)", 2),
        ("Down Up (Up qubit -o Up qubit @l)", 0),
    ],
)
def test_charge_counts_qubits(text, expected):
    assert charge(ty(text)) == expected


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(max_depth=0)
    with pytest.raises(ValueError):
        GenConfig(weights={"structural": -1})


def test_circuit_cases_balance_their_wires():
    cfg = GenConfig(mode_bias={Mode.Q: 1.0})
    rng = random.Random(7)
    for _ in range(20):
        goal, ctx = sample_case(cfg, rng)
        assert all(name.startswith("w") for name in ctx.names())
        assert charge(goal) == sum(charge(t) for _, t in ctx)


def test_functional_cases_have_empty_contexts():
    cfg = GenConfig(mode_bias={Mode.L: 1.0})
    goal, ctx = sample_case(cfg, random.Random(3))
    assert len(ctx) == 0
    assert mode_of(goal) is not Mode.Q


def test_zero_bias_everywhere_is_an_error():
    cfg = GenConfig(mode_bias={Mode.U: 0.0, Mode.L: 0.0, Mode.Q: 0.0})
    with pytest.raises(GenerationError):
        sample_case(cfg, random.Random(0))


def test_unbalanced_goal_is_refused():
    with pytest.raises(GenerationError):
        generate(GenConfig(), QUBIT, TypingContext())


def test_generation_is_reproducible():
    cfg = GenConfig(seed=11, max_depth=5)
    goal, ctx = sample_case(cfg, random.Random(11))
    try:
        first = generate(cfg, goal, ctx, random.Random(5)).program
    except GenerationError:
        pytest.skip("goal not constructible for this seed")
    second = generate(cfg, goal, ctx, random.Random(5)).program
    assert first == second


def test_generation_sites_cover_the_root():
    cfg = GenConfig(seed=1, max_depth=4)
    generated = generate(cfg, UnitAt(Mode.L), TypingContext(), random.Random(1))
    assert () in generated.sites
    assert generated.sites[()].goal == UnitAt(Mode.L)
    for path in generated.sites:
        subterm_at(generated.program, path)


def test_generated_binders_avoid_taken_names():
    cfg = GenConfig(seed=2, max_depth=6)
    taken = {f"x{i}" for i in range(1, 30)}
    generated = generate(cfg, UnitAt(Mode.L), TypingContext(), random.Random(2), taken=taken)
    assert not (all_names(generated.program) & taken)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(min_value=0, max_value=1_000_000))
def test_generated_programs_check_at_their_goal(seed):
    cfg = GenConfig(seed=seed, max_depth=5)
    rng = random.Random(seed)
    goal, ctx = sample_case(cfg, rng)
    try:
        program = generate(cfg, goal, ctx, rng).program
    except GenerationError:
        assume(False)
    report = check_pqa(stdlib_signature(), ctx, program, goal)
    assert report.ok, report.describe()


def test_gen_well_typed_defaults_to_the_config_seed(sig):
    cfg = GenConfig(seed=4, max_depth=4)
    program = gen_well_typed(cfg, UnitAt(Mode.L))
    assert program == gen_well_typed(cfg, UnitAt(Mode.L))
    assert check_pqa(sig, TypingContext(), program, UnitAt(Mode.L)).ok


def test_minimal_terms_are_small():
    site = Site(UnitAt(Mode.L), (), ())
    term = minimal_term(GenConfig(), site, prog("()"))
    assert size(term) <= 3
    assert check_pqa(stdlib_signature(), TypingContext(), term, UnitAt(Mode.L)).ok


# ---------------------------------------------------------------------------
# Mutation
# ---------------------------------------------------------------------------


def test_mutants_differ_from_the_original():
    original = sample("compose.pqa")
    for seed in range(20):
        assert mutate(original, random.Random(seed)) != original


def test_mutation_is_reproducible():
    original = sample("circuit_e.pqa")
    assert mutate(original, random.Random(4)) == mutate(original, random.Random(4))


def test_mutation_table_names_are_unique():
    names = [name for name, _ in MUTATIONS]
    assert len(names) == len(set(names))


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name", ["unit.pqa", "dup.pqa", "compose.pqa", "swap.pqa", "circuit_e.pqa", "empty.pqa"]
)
def test_oracle_agrees_on_samples(sig, name):
    p = sample(name)
    assert brute_force_split_check(TypingContext(), p, sig=sig) == check_pqa(
        sig, TypingContext(), p
    ).ok


def test_oracle_on_open_circuits(sig):
    one = TypingContext.of({"q": QUBIT})
    two = TypingContext.of({"q": QUBIT, "r": QUBIT})
    assert brute_force_split_check(one, prog("#H q"), QUBIT, sig)
    assert not brute_force_split_check(two, prog("#H q"), QUBIT, sig)
    assert brute_force_split_check(two, prog("#CNOT (q, r)"), sig=sig)


def test_oracle_limit():
    wide = TypingContext.of({f"q{i}": QUBIT for i in range(40)})
    with pytest.raises(OracleLimitError):
        brute_force_split_check(wide, prog("()"))


# ---------------------------------------------------------------------------
# Shrinking
# ---------------------------------------------------------------------------


def test_shrinking_keeps_the_type(sig):
    program = prog("(fn (x : unit@l) => match x with { () => () }) ()")
    result = shrink(program, UnitAt(Mode.L), TypingContext(), lambda q: True)
    assert result.steps >= 1
    assert size(result.program) < size(program)
    assert check_pqa(sig, TypingContext(), result.program, UnitAt(Mode.L)).ok


def test_shrinking_stops_when_the_failure_disappears():
    program = prog("(fn (x : unit@l) => x) ()")
    result = shrink(program, UnitAt(Mode.L), TypingContext(), lambda q: False)
    assert result.steps == 0
    assert result.program == program


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------


def test_suite_report_structure():
    report = run_suite(GenConfig(seed=3, max_depth=4), 4, fuel=500)
    assert report.count == 4
    assert list(report.properties) == [p.name for p in PROPERTIES]
    assert report.properties["generator soundness"].attempted == 4
    assert len(report.summary_lines()) == len(PROPERTIES)

    data = json.loads(report.to_json())
    assert data["seed"] == 3
    assert data["count"] == 4
    assert data["max_depth"] == 4
    assert data["ok"] == report.ok
    for result in data["properties"].values():
        assert result["attempted"] == result["passed"] + result["failed"]


TRACE_PROPERTIES = [
    "generator soundness",
    "finality",
    "determinism",
    "progress",
    "subject reduction (pqa)",
    "subject reduction (pqx)",
    "normalization",
]


def test_depth_eight_programs_satisfy_every_property():
    report = run_suite(GenConfig(seed=0, max_depth=8), 200)
    failed = {name: r.counterexamples[:1] for name, r in report.properties.items() if r.failed}
    assert report.ok, failed
    for name in TRACE_PROPERTIES:
        assert report.properties[name].attempted == 200, name
    assert all(r.attempted > 0 for r in report.properties.values())


def test_overlapping_rules_do_not_hide_the_trace(monkeypatch):
    real = suite_module.normalize

    def audited_overlap(pi, p, fuel=None, *, audit=None, record=True):
        if audit:
            raise DeterminismError("rules a, b all apply")
        return real(pi, p, fuel, audit=audit, record=record)

    monkeypatch.setattr(suite_module, "normalize", audited_overlap)
    report = run_suite(GenConfig(seed=3, max_depth=4), 3)
    assert report.properties["determinism"].failed == 3
    for name in TRACE_PROPERTIES:
        if name != "determinism":
            assert report.properties[name].failed == 0, name
            assert report.properties[name].attempted == 3, name


def test_suite_is_deterministic():
    cfg = GenConfig(seed=9, max_depth=4)
    assert run_suite(cfg, 3, fuel=500).to_json() == run_suite(cfg, 3, fuel=500).to_json()


def test_parallel_shards_merge_to_the_serial_report():
    cfg = GenConfig(seed=5, max_depth=4)
    serial = run_suite(cfg, 4, jobs=1, fuel=500)
    parallel = run_suite(cfg, 4, jobs=2, fuel=500)
    assert parallel.to_dict() == serial.to_dict()


@pytest.mark.parametrize("count, jobs", [(0, 1), (1, 0)])
def test_suite_arguments_are_validated(count, jobs):
    with pytest.raises(ValueError):
        run_suite(GenConfig(), count, jobs=jobs)
