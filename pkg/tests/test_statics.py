import pytest

from pqa.encoding import Q, combinator_type
from pqa.statics.checker import check_pattern_pqa, check_pqa, check_pqx
from pqa.statics.context import TypingContext, geq_mode
from pqa.syntax.parser import parse_program
from pqa.syntax.terms import C, F, Family, PUnit, Unit
from pqa.syntax.types import QUBIT, Arrow, Mode, Tensor, UnitAt, Up
from tests.helpers import SAMPLES, prog, ty

EMPTY = TypingContext()
PAIR = Tensor(QUBIT, QUBIT, Mode.Q)


def sample(name):
    return parse_program((SAMPLES / name).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Samples
# ---------------------------------------------------------------------------


def test_unit_defaults_to_mode_l(sig):
    report = check_pqa(sig, EMPTY, sample("unit.pqa"))
    assert report.ok
    assert report.type == UnitAt(Mode.L)
    assert report.describe() == "TYPE: unit@l"


def test_duplication_is_structural_only(sig):
    p = sample("dup.pqa")
    structural = check_pqx(sig, EMPTY, p)
    assert structural.ok
    unit = UnitAt(Mode.L)
    assert structural.type == Arrow(unit, Tensor(unit, unit, Mode.L), Mode.L)

    linear = check_pqa(sig, EMPTY, p)
    assert not linear.ok
    assert linear.error.code == "E102"
    assert linear.describe().startswith("error[E102]: ")


def test_box_sample_has_the_box_type(sig):
    report = check_pqa(sig, EMPTY, sample("box_qq.pqa"))
    assert report.ok, report.describe()
    assert report.type == combinator_type("box", Q, Q)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("compose.pqa", "qubit -o qubit @q"),
        (
            "circuit_e.pqa",
            "Up ((qubit * (qubit * qubit @q) @q) -o (qubit * (qubit * qubit @q) @q) @q)",
        ),
        ("empty.pqa", "Up unit@q"),
    ],
)
def test_circuit_samples(sig, name, expected):
    report = check_pqa(sig, EMPTY, sample(name))
    assert report.ok, report.describe()
    assert report.type == ty(expected)


def test_swap_type_structurally(sig):
    assert check_pqa(sig, EMPTY, sample("swap.pqa")).type == Arrow(PAIR, PAIR, Mode.Q)


def test_omega_is_rejected(sig):
    assert not check_pqa(sig, EMPTY, sample("omega.pqa")).ok


@pytest.mark.parametrize(
    "name", ["unit.pqa", "compose.pqa", "swap.pqa", "circuit_e.pqa", "box_qq.pqa", "empty.pqa"]
)
def test_structural_checker_agrees_on_linear_samples(sig, name):
    p = sample(name)
    linear = check_pqa(sig, EMPTY, p)
    structural = check_pqx(sig, EMPTY, p)
    assert linear.ok and structural.ok
    assert structural.type == linear.type


# ---------------------------------------------------------------------------
# Error codes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, ctx, code",
    [
        ("fn (x : unit@l) => ()", {}, "E101"),
        ("fn (x : unit@l) => susp x", {}, "E103"),
        ("lam (x : qubit) => #FOO x", {}, "E104"),
        ("fn x => x", {}, "E109"),
        ("q", {"q": QUBIT}, "E106"),
        ("()", {"c": Arrow(QUBIT, QUBIT, Mode.Q)}, "E105"),
        ("y", {}, "E107"),
    ],
)
def test_error_codes(sig, text, ctx, code):
    report = check_pqa(sig, TypingContext.of(ctx), prog(text))
    assert not report.ok
    assert report.error.code == code


def test_expected_type_mismatch(sig):
    report = check_pqa(sig, EMPTY, prog("()"), QUBIT)
    assert report.error.code == "E108"


def test_functional_pattern_on_a_circuit_type(sig):
    report = check_pattern_pqa(sig, EMPTY, PUnit(Unit(F), Family.FF), QUBIT)
    assert report.error.code == "E110"


def test_typing_errors_carry_spans(sig):
    report = check_pqa(sig, EMPTY, prog("fn (x : unit@l) =>\n  y"))
    assert report.error.code == "E107"
    assert report.error.span.line == 2


# ---------------------------------------------------------------------------
# Modes
# ---------------------------------------------------------------------------


def test_unrestricted_bindings_can_be_duplicated(sig):
    report = check_pqa(sig, EMPTY, prog("fn (x : unit@u) => (x, x)"))
    assert report.ok
    u = UnitAt(Mode.U)
    assert report.type == Arrow(u, Tensor(u, u, Mode.U), Mode.U)


def test_unit_mode_comes_from_the_expected_type(sig):
    assert check_pqa(sig, EMPTY, prog("()"), UnitAt(Mode.U)).type == UnitAt(Mode.U)


def test_match_retries_scrutinee_at_mode_u(sig):
    report = check_pqa(sig, EMPTY, prog("match () with { () => susp () }"))
    assert report.ok, report.describe()
    assert report.type == Up(UnitAt(Mode.L), Mode.L, Mode.U)


def test_pair_takes_unit_mode_from_its_sibling(sig):
    ctx = TypingContext.of({"x": UnitAt(Mode.U)})
    report = check_pqa(sig, ctx, prog("((), x)"))
    u = UnitAt(Mode.U)
    assert report.type == Tensor(u, u, Mode.U)


def test_context_mode_bounds():
    assert geq_mode(TypingContext.of({"x": UnitAt(Mode.U)}), Mode.U)
    circuit_ctx = TypingContext.of({"q": QUBIT})
    assert geq_mode(circuit_ctx, Mode.L)
    assert not geq_mode(circuit_ctx, Mode.U)
    assert geq_mode(EMPTY, Mode.U)


def test_context_rejects_duplicate_names():
    with pytest.raises(ValueError):
        TypingContext.of([("x", QUBIT), ("x", QUBIT)])


def test_context_partitions():
    ctx = TypingContext.of({"u": UnitAt(Mode.U), "q": QUBIT})
    assert ctx.unrestricted().names() == ("u",)
    assert ctx.linear().names() == ("q",)
    assert ctx.lookup("q") == QUBIT
    assert ctx.lookup("z") is None


# ---------------------------------------------------------------------------
# Linearity and audit
# ---------------------------------------------------------------------------


def test_consumed_circuit_variables(sig):
    report = check_pqa(sig, TypingContext.of({"q": QUBIT}), prog("#H q"))
    assert report.ok
    assert report.type == QUBIT
    assert report.consumed == {"q"}


def test_circuit_variables_are_linear(sig):
    ctx = TypingContext.of({"q": QUBIT})
    assert check_pqa(sig, ctx, prog("(q, q)", C)).error.code == "E102"
    assert check_pqx(sig, ctx, prog("(q, q)", C)).ok


def test_structural_checker_allows_weakening(sig):
    assert check_pqx(sig, EMPTY, prog("fn (x : unit@l) => ()")).ok


def test_audit_records_independent_judgements(sig):
    report = check_pqa(sig, EMPTY, sample("compose.pqa"), audit=True)
    assert report.ok
    assert report.judgements
    assert report.independence_violations() == []


def test_audit_is_off_by_default(sig):
    assert check_pqa(sig, EMPTY, sample("compose.pqa")).judgements == []
