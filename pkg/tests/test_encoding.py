import itertools

import pytest

from pqa.dynamics import normalize
from pqa.encoding import (
    COMBINATORS,
    I,
    PBang,
    PCirc,
    PLolli,
    PTensor,
    Q,
    combinator_type,
    enc_type,
    encode_simple,
    is_simple_pq,
    load_stdlib,
    mk_apply,
    mk_BOX,
    mk_box,
    mk_compose,
    mk_lax,
    mk_lax_simple,
    mk_oplax,
    mk_oplax_simple,
    simple_pqtypes,
)
from pqa.statics.checker import check_pqa
from pqa.statics.context import TypingContext
from pqa.syntax.names import alpha_eq
from pqa.syntax.terms import C, F, App, Force, Pair, SuspCirc
from pqa.syntax.types import Arrow, Mode, Up
from tests.helpers import prog, ty

SMALL = list(simple_pqtypes(1))


def test_simple_type_enumeration():
    assert SMALL[:2] == [I, Q]
    assert len(SMALL) == 6
    assert len(list(simple_pqtypes(2))) == 22
    assert all(is_simple_pq(t) for t in simple_pqtypes(2))


def test_simple_types_encode_as_wire_bundles():
    assert encode_simple(I) == ty("unit@q")
    assert encode_simple(PTensor(Q, PTensor(Q, I))) == ty("qubit * (qubit * unit@q @q) @q")
    with pytest.raises(ValueError):
        encode_simple(PLolli(Q, Q))


@pytest.mark.parametrize(
    "source, expected",
    [
        (Q, "Up qubit"),
        (I, "Up unit@q"),
        (PTensor(Q, Q), "Up qubit * Up qubit @l"),
        (PLolli(Q, Q), "Up qubit -o Up qubit @l"),
        (PCirc(Q, PTensor(Q, Q)), "Up (qubit -o qubit * qubit @q @q)"),
        (PBang(Q), "Down Up Up qubit"),
    ],
)
def test_source_type_encoding(source, expected):
    assert enc_type(source) == ty(expected)


def test_encoded_types_live_at_mode_l():
    assert enc_type(PBang(PLolli(Q, Q))).inner == Up(enc_type(PLolli(Q, Q)), Mode.L, Mode.U)


def test_circ_requires_simple_types():
    with pytest.raises(ValueError):
        PCirc(PLolli(Q, Q), Q)


@pytest.mark.parametrize(
    "name, s, u", [(n, s, u) for n in COMBINATORS for s, u in itertools.product(SMALL, SMALL)]
)
def test_combinators_have_their_types(sig, name, s, u):
    build, _ = COMBINATORS[name]
    report = check_pqa(sig, TypingContext(), build(s, u))
    assert report.ok, report.describe()
    assert report.type == combinator_type(name, s, u)


UP_TO_TWO = list(simple_pqtypes(2))
THREE_TENSORS = [t for t in simple_pqtypes(3) if t not in UP_TO_TWO]


@pytest.mark.parametrize("name", sorted(COMBINATORS))
def test_combinators_at_every_small_pair(sig, name):
    pairs = list(itertools.product(UP_TO_TWO, UP_TO_TWO)) + [(t, t) for t in THREE_TENSORS]
    build, _ = COMBINATORS[name]
    wrong = []
    for s, u in pairs:
        report = check_pqa(sig, TypingContext(), build(s, u))
        if not report.ok or report.type != combinator_type(name, s, u):
            wrong.append((s, u, report.describe()))
    assert len(pairs) == 22 * 22 + 80
    assert wrong == []


@pytest.mark.parametrize("s", list(simple_pqtypes(2)), ids=str)
def test_lax_and_oplax_lift_to_whole_types(sig, s):
    wires = Up(encode_simple(s), Mode.Q, Mode.L)
    lax = check_pqa(sig, TypingContext(), mk_lax_simple(s))
    oplax = check_pqa(sig, TypingContext(), mk_oplax_simple(s))
    assert lax.type == Arrow(enc_type(s), wires, Mode.L)
    assert oplax.type == Arrow(wires, enc_type(s), Mode.L)


def test_compose_combinator(sig):
    report = check_pqa(sig, TypingContext(), mk_compose(Q, PTensor(Q, Q), I))
    expected = ty(
        "Up (qubit * qubit @q -o unit@q @q) "
        "-o (Up (qubit -o qubit * qubit @q @q) -o Up (qubit -o unit@q @q) @l) @l"
    )
    assert report.ok, report.describe()
    assert report.type == expected


@pytest.mark.parametrize("name", sorted(COMBINATORS))
def test_combinators_reject_non_simple_types(name):
    build, _ = COMBINATORS[name]
    with pytest.raises(ValueError):
        build(PLolli(Q, Q), Q)


def test_named_builders_match_the_table(sig):
    for name, build in [("BOX", mk_BOX), ("box", mk_box), ("apply", mk_apply)]:
        assert build(Q, Q) == COMBINATORS[name][0](Q, Q)
    assert check_pqa(sig, TypingContext(), mk_lax(Q, Q)).type == combinator_type("lax", Q, Q)
    assert check_pqa(sig, TypingContext(), mk_oplax(Q, I)).type == combinator_type("oplax", Q, I)


def test_custom_gate_libraries(sig):
    extra = load_stdlib("gate SWAP : qubit * qubit -o qubit * qubit")
    assert list(extra) == ["SWAP"]
    assert extra["SWAP"] == sig["CNOT"]
    assert set(sig) == {"H", "X", "Y", "Z", "S", "T", "CNOT"}


# ---------------------------------------------------------------------------
# Running the combinators
# ---------------------------------------------------------------------------


def test_applying_a_boxed_gate_to_a_wire():
    program = App(App(mk_apply(Q, Q), prog("circ { #H }"), F), prog("circ { x }"), F)
    trace = normalize(("x",), program, 1000, audit=True)
    assert trace.is_normal
    assert isinstance(trace.result, SuspCirc)

    forced = normalize(("x",), Force(trace.result, C), 1000, audit=True)
    assert alpha_eq(forced.result, prog("#H x", C))


def test_boxing_the_identity_gives_the_identity_circuit(sig):
    program = App(mk_BOX(Q, Q), prog("fn (w : Up qubit) => w"), F)
    assert check_pqa(sig, TypingContext(), program).type == ty("Up (qubit -o qubit @q)")

    trace = normalize((), program, 1000, audit=True)
    assert isinstance(trace.result, SuspCirc)
    forced = normalize((), Force(trace.result, C), 1000, audit=True)
    assert alpha_eq(forced.result, prog("lam (s : qubit) => s", C))


def test_lax_on_the_unit_bundle_is_the_identity():
    trace = normalize((), App(mk_lax_simple(I), prog("circ { () }"), F), 1000, audit=True)
    assert trace.result == prog("circ { () }")


def test_lax_gathers_suspended_wires():
    wires = Pair(prog("circ { x1 }"), prog("circ { x2 }"), F)
    program = Force(App(mk_lax_simple(PTensor(Q, Q)), wires, F), C)
    trace = normalize(("x1", "x2"), program, 1000, audit=True)
    assert trace.is_normal
    assert trace.result == prog("(x1, x2)", C)
