"""The source circuit language's boxing abstractions as closed programs.

``mk_lax`` and ``mk_oplax`` move a shift across one tensor; the
``*_simple`` variants lift them to a whole simple type by recursion on
its right-nested tensor tree.  ``mk_BOX``, ``mk_box`` and ``mk_apply``
are then ordinary higher-order functions over the encoded types.

All builders return ASTs; they never go through the parser.
"""

from __future__ import annotations

from typing import Callable, Dict, Tuple

from pqa.encoding.pqtypes import (
    PLolli,
    PQType,
    PTensor,
    enc_type,
    encode_simple,
    is_simple_pq,
)
from pqa.syntax.terms import (
    App,
    C,
    F,
    Family,
    Force,
    Lam,
    Match,
    Pair,
    PDown,
    PPair,
    Program,
    SuspCirc,
    Var,
)
from pqa.syntax.types import Arrow, Down, Mode, Tensor, TypeExpr, Up

# ---------------------------------------------------------------------------
# AST shorthands
# ---------------------------------------------------------------------------


def _fn(x: str, ty: TypeExpr, body: Program) -> Program:
    return Lam(x, body, F, ty)


def _fv(x: str) -> Program:
    return Var(x, F)


def _cv(x: str) -> Program:
    return Var(x, C)


def _app(fn: Program, arg: Program) -> Program:
    return App(fn, arg, F)


def _split(scrutinee: Program, x: str, y: str, body: Program, family: Family) -> Program:
    return Match(scrutinee, PPair(x, y, body, family))


def _up_q(s: TypeExpr) -> Up:
    return Up(s, Mode.Q, Mode.L)


def _require_simple(*types: PQType) -> None:
    for t in types:
        if not is_simple_pq(t):
            raise ValueError(f"expected a simple type, got {t}")


# ---------------------------------------------------------------------------
# lax / oplax
# ---------------------------------------------------------------------------


def mk_lax(s: PQType, u: PQType) -> Program:
    """``(Up S * Up U @l) -o Up (S * U @q) @l``: gather two suspended bundles."""
    _require_simple(s, u)
    dom = Tensor(_up_q(encode_simple(s)), _up_q(encode_simple(u)), Mode.L)
    body = _split(
        _fv("x"),
        "a",
        "b",
        SuspCirc(Pair(Force(_fv("a"), C), Force(_fv("b"), C), C)),
        Family.FF,
    )
    return _fn("x", dom, body)


def mk_oplax(s: PQType, u: PQType) -> Program:
    """``Up (S * U @q) -o (Up S * Up U @l) @l``: split a suspended bundle."""
    _require_simple(s, u)
    dom = _up_q(Tensor(encode_simple(s), encode_simple(u), Mode.Q))
    body = _split(
        Force(_fv("x"), C),
        "a",
        "b",
        Pair(SuspCirc(_cv("a")), SuspCirc(_cv("b")), F),
        Family.QF,
    )
    return _fn("x", dom, body)


def mk_lax_simple(s: PQType) -> Program:
    """``enc(S) -o Up S @l``."""
    _require_simple(s)
    if not isinstance(s, PTensor):
        return _fn("x", enc_type(s), _fv("x"))
    pair = Pair(
        _app(mk_lax_simple(s.left), _fv("a")),
        _app(mk_lax_simple(s.right), _fv("b")),
        F,
    )
    body = _split(_fv("x"), "a", "b", _app(mk_lax(s.left, s.right), pair), Family.FF)
    return _fn("x", enc_type(s), body)


def mk_oplax_simple(s: PQType) -> Program:
    """``Up S -o enc(S) @l``."""
    _require_simple(s)
    dom = _up_q(encode_simple(s))
    if not isinstance(s, PTensor):
        return _fn("x", dom, _fv("x"))
    pair = Pair(
        _app(mk_oplax_simple(s.left), _fv("a")),
        _app(mk_oplax_simple(s.right), _fv("b")),
        F,
    )
    body = _split(_app(mk_oplax(s.left, s.right), _fv("x")), "a", "b", pair, Family.FF)
    return _fn("x", dom, body)


# ---------------------------------------------------------------------------
# box / apply
# ---------------------------------------------------------------------------


def mk_BOX(s: PQType, u: PQType) -> Program:  # noqa: N802
    """Box a linear function between encoded simple types as a circuit."""
    _require_simple(s, u)
    f_type = enc_type(PLolli(s, u))
    wire = encode_simple(s)
    inner = _app(
        mk_lax_simple(u),
        _app(_fv("f"), _app(mk_oplax_simple(s), SuspCirc(_cv("s")))),
    )
    circuit = Lam("s", Force(inner, C), C, wire)
    return _fn("f", f_type, SuspCirc(circuit))


def mk_box(s: PQType, u: PQType) -> Program:
    """Box a duplicable linear function: ``Down Up (enc S -o enc U @l)``."""
    _require_simple(s, u)
    dom = Down(Up(enc_type(PLolli(s, u)), Mode.L, Mode.U))
    body = Match(_fv("x"), PDown("f", _app(mk_BOX(s, u), Force(_fv("f"), F))))
    return _fn("x", dom, body)


def mk_apply(s: PQType, u: PQType) -> Program:
    """Apply a boxed circuit to encoded wires."""
    _require_simple(s, u)
    circ_type = _up_q(Arrow(encode_simple(s), encode_simple(u), Mode.Q))
    wires = App(
        Force(_fv("f"), C),
        Force(_app(mk_lax_simple(s), _fv("s")), C),
        C,
    )
    body = _app(mk_oplax_simple(u), SuspCirc(wires))
    return _fn("f", circ_type, _fn("s", enc_type(s), body))


def mk_compose(s: PQType, u: PQType, v: PQType) -> Program:
    """Compose boxed circuits: ``fn g => fn f => circ { lam x => g (f x) }``."""
    _require_simple(s, u, v)
    g_type = _up_q(Arrow(encode_simple(u), encode_simple(v), Mode.Q))
    f_type = _up_q(Arrow(encode_simple(s), encode_simple(u), Mode.Q))
    composed = App(Force(_fv("g"), C), App(Force(_fv("f"), C), _cv("x"), C), C)
    circuit = Lam("x", composed, C, encode_simple(s))
    return _fn("g", g_type, _fn("f", f_type, SuspCirc(circuit)))


# ---------------------------------------------------------------------------
# Expected types
# ---------------------------------------------------------------------------


def _lax_type(s: PQType, u: PQType) -> TypeExpr:
    gathered = Tensor(_up_q(encode_simple(s)), _up_q(encode_simple(u)), Mode.L)
    return Arrow(gathered, _up_q(Tensor(encode_simple(s), encode_simple(u), Mode.Q)), Mode.L)


def _oplax_type(s: PQType, u: PQType) -> TypeExpr:
    gathered = Tensor(_up_q(encode_simple(s)), _up_q(encode_simple(u)), Mode.L)
    return Arrow(_up_q(Tensor(encode_simple(s), encode_simple(u), Mode.Q)), gathered, Mode.L)


def _circ(s: PQType, u: PQType) -> TypeExpr:
    return _up_q(Arrow(encode_simple(s), encode_simple(u), Mode.Q))


def _BOX_type(s: PQType, u: PQType) -> TypeExpr:  # noqa: N802
    return Arrow(enc_type(PLolli(s, u)), _circ(s, u), Mode.L)


def _box_type(s: PQType, u: PQType) -> TypeExpr:
    return Arrow(Down(Up(enc_type(PLolli(s, u)), Mode.L, Mode.U)), _circ(s, u), Mode.L)


def _apply_type(s: PQType, u: PQType) -> TypeExpr:
    return Arrow(_circ(s, u), enc_type(PLolli(s, u)), Mode.L)


COMBINATORS: Dict[str, Tuple[Callable[[PQType, PQType], Program], Callable]] = {
    "lax": (mk_lax, _lax_type),
    "oplax": (mk_oplax, _oplax_type),
    "BOX": (mk_BOX, _BOX_type),
    "box": (mk_box, _box_type),
    "apply": (mk_apply, _apply_type),
}


def combinator_type(name: str, s: PQType, u: PQType) -> TypeExpr:
    """The advertised type of combinator *name* at simple types *s* and *u*."""
    return COMBINATORS[name][1](s, u)
