import random

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from pqa.errors import (
    ColorError,
    GenerationError,
    ParseError,
    SignatureError,
    Span,
    TypeMismatchError,
)
from pqa.harness.generator import GenConfig, generate, sample_case
from pqa.syntax.names import (
    FreshNames,
    alpha_eq,
    free_circuit_vars,
    free_vars,
    subst,
    substitute,
)
from pqa.syntax.parser import parse, parse_program, parse_signature
from pqa.syntax.printer import print_program
from pqa.syntax.signature import Signature
from pqa.syntax.terms import (
    App,
    C,
    F,
    Family,
    Force,
    Gate,
    Lam,
    Match,
    PPair,
    Unit,
    Var,
    positions,
    replace_at,
    size,
    subterm_at,
)
from pqa.syntax.types import (
    QUBIT,
    Arrow,
    Down,
    Mode,
    Tensor,
    UnitAt,
    Up,
    check_type,
    is_simple,
    mode_geq,
    mode_of,
    print_type,
)
from tests.helpers import SAMPLES, prog, ty


# ---------------------------------------------------------------------------
# Modes and types
# ---------------------------------------------------------------------------


def test_mode_preorder():
    assert mode_geq(Mode.U, Mode.L)
    assert mode_geq(Mode.U, Mode.Q)
    assert mode_geq(Mode.L, Mode.Q)
    assert mode_geq(Mode.Q, Mode.L)
    assert not mode_geq(Mode.L, Mode.U)
    assert not mode_geq(Mode.Q, Mode.U)
    for m in Mode:
        assert mode_geq(m, m)


@pytest.mark.parametrize(
    "text",
    [
        "unit@l",
        "unit@u",
        "qubit",
        "qubit * qubit @q",
        "Up qubit",
        "Up (qubit -o qubit @q)",
        "Down Up (Up qubit -o Up qubit @l)",
        "(qubit * (qubit * qubit @q) @q) -o (qubit * unit@q @q) @q",
        "unit@u -o unit@u @u",
        "Up qubit * Up qubit @l",
    ],
)
def test_type_printing_round_trips(text):
    assert print_type(ty(text)) == text


def test_shift_modes_follow_the_operand():
    assert ty("Up qubit") == Up(QUBIT, Mode.Q, Mode.L)
    assert ty("Up unit@l") == Up(UnitAt(Mode.L), Mode.L, Mode.U)
    assert ty("Down unit@u") == Down(UnitAt(Mode.U), Mode.L, Mode.U)
    assert mode_of(ty("Down Up (unit@l -o unit@l @l)")) is Mode.L


@pytest.mark.parametrize("text", ["Up unit@u", "Down unit@l", "Down qubit"])
def test_ill_moded_shifts_are_parse_errors(text):
    with pytest.raises(ParseError):
        ty(text)


def test_simple_types():
    assert is_simple(ty("qubit * unit@q @q"))
    assert not is_simple(ty("unit@l"))
    assert not is_simple(ty("Up qubit"))


def test_check_type_rejects_mixed_tensor():
    with pytest.raises(TypeMismatchError):
        check_type(Tensor(QUBIT, UnitAt(Mode.L), Mode.Q))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def test_colors_come_from_position():
    fn = prog("fn (x : unit@l) => x")
    assert isinstance(fn, Lam) and fn.color is F and fn.annotation == UnitAt(Mode.L)
    lam = prog("lam (x : qubit) => #H x")
    assert lam.color is C
    assert lam.body == App(Gate("H"), Var("x", C), C)
    assert prog("#H") == Gate("H")
    assert prog("force { f }") == Force(Var("f", F), C)


def test_bare_binder_has_no_annotation():
    assert prog("fn x => x").annotation is None


def test_match_families():
    assert prog("match p with { (a, b) => a }").family is Family.FF
    assert prog("match circval #H with { (a, b) => a }").family is Family.QF
    qq = prog("match q with { (a, b) => (b, a) }", C)
    assert isinstance(qq, Match) and qq.family is Family.QQ
    assert isinstance(qq.pattern, PPair) and qq.pattern.binders == ("a", "b")


def test_spans_point_into_the_source():
    p = prog("fn (x : unit@l) =>\n  y")
    assert p.span == Span(1, 1)
    assert p.body.span == Span(2, 3)


def test_spans_do_not_affect_equality():
    assert prog("fn (x : unit@l) => x") == prog("fn   (x : unit@l)\n=>  x")


def test_comments_are_ignored():
    assert prog("-- a comment\n() -- trailing") == Unit(F)


def test_syntax_error_diagnostic():
    with pytest.raises(ParseError) as info:
        prog("fn (x : unit@l) => )")
    assert info.value.code == "E001"
    assert info.value.diagnostic("f.pqa").startswith("f.pqa:1:")
    assert "error[E001]" in info.value.diagnostic("f.pqa")


def test_gate_in_functional_position():
    with pytest.raises(ColorError) as info:
        prog("fn (x : unit@l) => #H", F)
    assert info.value.code == "E002"


@pytest.mark.parametrize("text", ["circ { q }", "susp q", "down q"])
def test_functional_constructors_inside_circuits(text):
    with pytest.raises(ColorError):
        prog(f"lam (q : qubit) => {text}", C)


def test_pattern_cannot_bind_a_name_twice():
    with pytest.raises(ParseError):
        prog("match p with { (a, a) => a }", F)


def test_signature_parsing(sig):
    assert set(sig) == {"H", "X", "Y", "Z", "S", "T", "CNOT"}
    pair = Tensor(QUBIT, QUBIT, Mode.Q)
    assert sig["CNOT"] == Arrow(pair, pair, Mode.Q)
    assert sig["H"] == Arrow(QUBIT, QUBIT, Mode.Q)


def test_duplicate_gate_is_rejected():
    with pytest.raises(SignatureError) as info:
        parse_signature("gate H : qubit -o qubit\ngate H : qubit -o qubit")
    assert info.value.code == "E003"


def test_signature_requires_circuit_arrows():
    with pytest.raises(SignatureError):
        Signature({"B": Arrow(UnitAt(Mode.L), UnitAt(Mode.L), Mode.L)})


def test_parse_dispatches_on_first_token():
    assert isinstance(parse("-- gates\ngate H : qubit -o qubit"), Signature)
    assert isinstance(parse(""), Signature)
    assert parse("()") == Unit(F)
    assert parse("#X") == Gate("X")


@pytest.mark.parametrize("text", ["x", "()", "(x, y)", "match x with { (a, b) => (b, a) }"])
def test_uncolored_text_reads_as_a_functional_term(text):
    assert parse(text).color is F
    assert parse(text, C).color is C


@pytest.mark.parametrize(
    "text",
    [
        "(x, y)",
        "match q with { (a, b) => (b, a) }",
        "lam (x : qubit) => #H x",
        "force { circ { #H } } q",
    ],
)
def test_parse_round_trips_circuits_with_their_color(text):
    p = prog(text, C)
    assert parse(print_program(p), p.color) == p


# ---------------------------------------------------------------------------
# Names and substitution
# ---------------------------------------------------------------------------


def test_free_variables():
    p = prog("lam (x : qubit) => #CNOT (x, y)", C)
    assert free_vars(p) == {"y"}
    assert free_circuit_vars(p) == {"y"}
    q = prog("circ { force { f } (force { g } z) }", F)
    assert free_vars(q) == {"f", "g", "z"}
    assert free_circuit_vars(q) == {"z"}


def test_alpha_equivalence():
    assert alpha_eq(prog("fn (x : unit@l) => x"), prog("fn (y : unit@l) => y"))
    assert not alpha_eq(prog("fn (x : unit@l) => x"), prog("fn (y : unit@l) => x"))
    assert not alpha_eq(prog("fn (x : unit@l) => x"), prog("fn (x : unit@u) => x"))
    assert alpha_eq(
        prog("fn (x : unit@l) => x"), prog("fn y => y"), ignore_annotations=True
    )
    assert alpha_eq(
        prog("match p with { (a, b) => (b, a) }"), prog("match p with { (c, d) => (d, c) }")
    )


def test_substitution_avoids_capture():
    body = prog("fn (y : unit@l) => x")
    result = subst(body, "x", Var("y", F))
    assert free_vars(result) == {"y"}
    assert result.binder != "y"
    assert alpha_eq(result, prog("fn (z : unit@l) => y"))
    assert print_program(result) == "fn (y1 : unit@l) => y"


def test_substitution_is_simultaneous():
    p = prog("(a, b)")
    swapped = substitute(p, {"a": Var("b", F), "b": Var("a", F)})
    assert swapped == prog("(b, a)")


def test_substitution_leaves_bound_names_alone():
    p = prog("match p with { (x, y) => x }")
    assert subst(p, "x", Unit(F)) == p


def test_fresh_names_are_reserved():
    fresh = FreshNames()
    a, b = fresh.pick("x"), fresh.pick("x")
    assert a != b and a.startswith("%") and b.startswith("%")


# ---------------------------------------------------------------------------
# Traversal and printing
# ---------------------------------------------------------------------------


def test_positions_and_replacement():
    p = prog("(a, (b, c))")
    assert size(p) == 5
    assert list(positions(p)) == [(), (0,), (1,), (1, 0), (1, 1)]
    assert subterm_at(p, (1, 0)) == Var("b", F)
    assert replace_at(p, (1, 1), Unit(F)) == prog("(a, (b, ()))")


def test_printer_annotations_are_optional():
    p = prog("lam (x : qubit) => #Z (#H x)", C)
    assert print_program(p) == "lam (x : qubit) => #Z (#H x)"
    assert print_program(p, annotations=False) == "lam x => #Z (#H x)"


@pytest.mark.parametrize("path", sorted(SAMPLES.glob("*.pqa")), ids=lambda p: p.name)
def test_samples_print_and_parse_back(path):
    p = parse_program(path.read_text(encoding="utf-8"))
    assert parse_program(print_program(p), p.color) == p


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(seed=st.integers(min_value=0, max_value=100_000))
def test_generated_programs_print_and_parse_back(seed):
    cfg = GenConfig(seed=seed, max_depth=5)
    rng = random.Random(seed)
    goal, ctx = sample_case(cfg, rng)
    try:
        p = generate(cfg, goal, ctx, rng).program
    except GenerationError:
        assume(False)
    assert alpha_eq(parse_program(print_program(p), p.color), p)
