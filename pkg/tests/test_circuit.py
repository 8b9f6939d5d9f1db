import pytest

from pqa.circuit import (
    Diagram,
    GateBox,
    check_normal_grammar,
    diagram_equiv,
    extract_diagram,
    flatten,
    render_ascii,
    render_dot,
)
from pqa.dynamics import TypedNeutralContext, normalize
from pqa.encoding import PTensor, Q, mk_apply, mk_BOX
from pqa.errors import CircuitError
from pqa.statics.checker import check_pqa
from pqa.statics.context import TypingContext
from pqa.syntax.names import substitute
from pqa.syntax.parser import parse_program
from pqa.syntax.terms import C, F, App, Force, Gate, Lam
from pqa.syntax.types import QUBIT, Mode, Tensor, UnitAt
from tests.helpers import SAMPLES, prog, ty

NO_WIRES = TypedNeutralContext()
E_TYPE = "(qubit * (qubit * qubit @q) @q) -o (qubit * (qubit * qubit @q) @q) @q"


@pytest.fixture
def circuit_e():
    """The normal form of the three-wire sample, unsuspended."""
    source = parse_program((SAMPLES / "circuit_e.pqa").read_text(encoding="utf-8"))
    trace = normalize((), Force(source, C))
    assert trace.is_normal
    return trace.result


# ---------------------------------------------------------------------------
# Normal-form grammar
# ---------------------------------------------------------------------------


def test_neutral_gate_application_conforms(sig):
    psi = TypedNeutralContext.of({"q": QUBIT})
    report = check_normal_grammar(QUBIT, psi, prog("#H q", C), sig)
    assert report.conforms
    assert report.grammar_case == "neutral"
    assert report.describe() == "normal form (neutral)"


def test_circuit_function_conforms(sig, circuit_e):
    report = check_normal_grammar(ty(E_TYPE), NO_WIRES, circuit_e, sig)
    assert report.conforms, report.describe()
    assert report.grammar_case == "lam"


@pytest.mark.parametrize(
    "type_text, text, case",
    [
        ("unit@l", "()", "unit"),
        ("unit@u * unit@u @u", "((), ())", "pair"),
        ("Up unit@l", "susp ()", "susp"),
        ("Up (qubit -o qubit @q)", "circ { #H }", "circ"),
        ("qubit -o qubit @q", "#H", "gate"),
    ],
)
def test_grammar_cases(sig, type_text, text, case):
    report = check_normal_grammar(ty(type_text), NO_WIRES, prog(text), sig)
    assert report.conforms, report.describe()
    assert report.grammar_case == case


def test_reducible_programs_do_not_conform(sig):
    report = check_normal_grammar(UnitAt(Mode.L), NO_WIRES, prog("(fn x => x) ()"), sig)
    assert not report.conforms
    assert report.describe().startswith("not a normal form at root")


def test_neutral_type_must_match(sig):
    psi = TypedNeutralContext.of({"q": QUBIT})
    pair = Tensor(QUBIT, QUBIT, Mode.Q)
    assert not check_normal_grammar(pair, psi, prog("#H q", C), sig).conforms


def test_closed_values_need_an_empty_neutral_context(sig):
    psi = TypedNeutralContext.of({"q": QUBIT})
    assert not check_normal_grammar(UnitAt(Mode.U), psi, prog("()"), sig).conforms


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------


def test_extracted_gates_follow_application_order(sig, circuit_e):
    d = extract_diagram(NO_WIRES, circuit_e, ty(E_TYPE), sig)
    assert d.input_labels == ("x1", "x2", "x3")
    assert [box.gate for box in d.gates] == ["CNOT", "H", "CNOT"]
    assert d.gates[0] == GateBox("CNOT", ("x1", "x2"), ("y1", "y2"))
    assert d.gates[1].inputs == ("x3",)
    assert d.gates[2].inputs == ("y2", d.gates[1].outputs[0])
    assert len(d.output_labels) == 3
    assert d.output_labels[0] == "y1"
    assert d.output_labels[1:] == d.gates[2].outputs


def test_equivalence_ignores_names_and_independent_order(sig, circuit_e):
    d = extract_diagram(NO_WIRES, circuit_e, sig=sig)
    reordered = Diagram(
        input_labels=("a", "b", "c"),
        gates=(
            GateBox("H", ("c",), ("h",)),
            GateBox("CNOT", ("a", "b"), ("p", "q")),
            GateBox("CNOT", ("q", "h"), ("r", "s")),
        ),
        outputs=("p", ("r", "s")),
    )
    assert diagram_equiv(d, reordered)

    crossed = Diagram(
        input_labels=("a", "b", "c"),
        gates=(
            GateBox("H", ("c",), ("h",)),
            GateBox("CNOT", ("a", "b"), ("p", "q")),
            GateBox("CNOT", ("h", "q"), ("r", "s")),
        ),
        outputs=("p", ("r", "s")),
    )
    assert not diagram_equiv(d, crossed)


def test_bare_gate_diagram(sig):
    d = extract_diagram(NO_WIRES, Gate("H"), sig=sig)
    assert d.input_labels == ("x",)
    assert [box.gate for box in d.gates] == ["H"]
    assert d.output_labels == d.gates[0].outputs


def test_open_circuit_uses_context_wires(sig):
    psi = TypedNeutralContext.of({"q": QUBIT, "r": QUBIT})
    d = extract_diagram(psi, prog("#CNOT (r, q)", C), sig=sig)
    assert d.input_labels == ("q", "r")
    assert d.gates[0].inputs == ("r", "q")


def test_unused_wires_are_rejected(sig):
    psi = TypedNeutralContext.of({"q": QUBIT, "r": QUBIT})
    with pytest.raises(CircuitError):
        extract_diagram(psi, prog("#H q", C), sig=sig)


def test_functional_programs_have_no_diagram(sig):
    with pytest.raises(CircuitError):
        extract_diagram(NO_WIRES, prog("()"), sig=sig)


def test_linearity_of_hand_built_diagrams():
    bad = Diagram(
        input_labels=("a",),
        gates=(GateBox("H", ("a",), ("b",)), GateBox("H", ("a",), ("c",))),
        outputs=("b", "c"),
    )
    with pytest.raises(CircuitError):
        bad.check_linear()


def test_flatten_bundles():
    assert flatten(("a", ((), ("b", "c")))) == ("a", "b", "c")
    assert flatten(()) == ()


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def test_ascii_rendering(sig, circuit_e):
    text = render_ascii(extract_diagram(NO_WIRES, circuit_e, sig=sig))
    assert text.endswith("\n")
    rows = text.splitlines()
    assert len(rows) == 3
    assert [row.split()[0] for row in rows] == ["x1", "x2", "x3"]
    assert "[CNOT]" in rows[0]
    assert rows[1].count("[CNOT]") == 2
    assert "H" in rows[2] and "[" in rows[2]
    assert rows[0].endswith("-- y1")


def test_dot_rendering(sig, circuit_e):
    text = render_dot(extract_diagram(NO_WIRES, circuit_e, sig=sig))
    assert text.startswith("digraph circuit {\n  rankdir=LR;\n  node [shape=box];\n")
    assert '  in0 [label="x1", shape=plaintext];' in text
    assert '  g0 [label="CNOT"];' in text
    assert '  g1 [label="H"];' in text
    assert '  in0 -> g0 [label="x1"];' in text
    assert '  out2 [label=' in text
    assert text.endswith("}\n")


def test_empty_diagram_rendering(sig):
    d = extract_diagram(NO_WIRES, prog("()", C), sig=sig)
    assert d.is_empty
    assert render_ascii(d) == ""
    assert render_dot(d) == "digraph circuit {\n  rankdir=LR;\n}\n"


# ---------------------------------------------------------------------------
# Circuits assembled from the boxing combinators
# ---------------------------------------------------------------------------

E_WIRES = PTensor(Q, PTensor(Q, Q))
E_BODY = """
fn (x : Up qubit * (Up qubit * Up qubit @l) @l) =>
  match x with {
    (x1, x23) =>
      match x23 with {
        (x2, x3) => match cnot (x1, x2) with { (y1, y2) => (y1, cnot (y2, h x3)) }
      }
  }
"""


@pytest.fixture
def boxed_e():
    """Circuit E as a boxed function over applied CNOT and H circuits."""
    cnot = App(mk_apply(PTensor(Q, Q), PTensor(Q, Q)), prog("circ { #CNOT }"), F)
    h = App(mk_apply(Q, Q), prog("circ { #H }"), F)
    body = substitute(prog(E_BODY), {"cnot": cnot, "h": h})
    return App(mk_BOX(E_WIRES, E_WIRES), body, F)


def test_boxed_e_has_the_circuit_type(sig, boxed_e):
    report = check_pqa(sig, TypingContext(), boxed_e)
    assert report.ok, report.describe()
    assert report.type == ty(f"Up ({E_TYPE})")


def test_boxed_e_draws_the_same_circuit(sig, boxed_e, circuit_e):
    trace = normalize((), Force(boxed_e, C), audit=True)
    assert trace.is_normal
    assert isinstance(trace.result, Lam)

    report = check_normal_grammar(ty(E_TYPE), NO_WIRES, trace.result, sig)
    assert report.conforms, report.describe()

    d = extract_diagram(NO_WIRES, trace.result, ty(E_TYPE), sig)
    assert sorted(box.gate for box in d.gates) == ["CNOT", "CNOT", "H"]
    assert len(d.output_labels) == 3
    assert diagram_equiv(d, extract_diagram(NO_WIRES, circuit_e, ty(E_TYPE), sig))
