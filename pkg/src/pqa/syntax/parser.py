"""Surface-syntax parser built on ``lark``.

One LALR grammar with four start symbols: functional terms, circuits,
types and gate signature files.  Colors are fixed by grammatical
position, so the tree transformer can build colored nodes directly.
"""

from __future__ import annotations

import logging
import re
from typing import Optional, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from pqa.errors import (
    ColorError,
    ParseError,
    PqaError,
    SignatureError,
    Span,
    TypeMismatchError,
)
from pqa.syntax.signature import Signature, validate_gate_type
from pqa.syntax.terms import (
    App,
    C,
    Color,
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
    DownIntro,
    Unit,
    Var,
)
from pqa.syntax.types import QUBIT, Arrow, Mode, Tensor, TypeExpr, UnitAt, down, up

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start_term: term
start_circ: circ
start_type: type
start_sig: gate_decl*

// -- functional terms --------------------------------------------------------

?term: "fn" binder "=>" term                              -> fn
     | "match" term "with" "{" ffpat "}"                  -> ffmatch
     | "match" "circval" circ "with" "{" qfpat "}"        -> qfmatch
     | app

?app: app arg                                             -> fapp
    | arg

?arg: "susp" arg                                          -> susp
    | "down" arg                                          -> down_intro
    | "force" arg                                         -> fforce
    | atom

?atom: IDENT                                              -> fvar
     | "(" ")"                                            -> funit
     | "(" term "," term ")"                              -> fpair
     | "(" term ")"
     | "circ" "{" circ "}"                                -> susp_circ
     | GATE                                               -> misplaced_gate

binder: IDENT                                             -> bare_binder
      | "(" IDENT ":" type ")"                            -> typed_binder

ffpat: "(" ")" "=>" term                                  -> unit_pat
     | "(" IDENT "," IDENT ")" "=>" term                  -> pair_pat
     | "down" IDENT "=>" term                             -> down_pat

qfpat: "(" ")" "=>" term                                  -> unit_pat
     | "(" IDENT "," IDENT ")" "=>" term                  -> pair_pat

// -- circuits -----------------------------------------------------------------

?circ: "lam" binder "=>" circ                             -> clam
     | "match" circ "with" "{" qqpat "}"                  -> qqmatch
     | capp

?capp: capp catom                                         -> capp_app
     | catom

?catom: IDENT                                             -> cvar
      | "(" ")"                                           -> cunit
      | "(" circ "," circ ")"                             -> cpair
      | "(" circ ")"
      | GATE                                              -> gate
      | "force" "{" term "}"                              -> cforce
      | "circ" "{" circ "}"                               -> misplaced_circ
      | "susp" catom                                      -> misplaced_susp
      | "down" catom                                      -> misplaced_down

qqpat: "(" ")" "=>" circ                                  -> unit_pat
     | "(" IDENT "," IDENT ")" "=>" circ                  -> pair_pat

// -- types ---------------------------------------------------------------------

?type: tprod "-o" tprod AT_MODE                           -> tarrow
     | tprod

?tprod: tunary "*" tunary AT_MODE                         -> ttensor
      | tunary

?tunary: "Up" tunary                                      -> tup
       | "Down" tunary                                    -> tdown
       | tatom

?tatom: UNIT_AT                                           -> tunit
      | "qubit"                                           -> tqubit
      | "(" type ")"

// -- signatures ----------------------------------------------------------------

gate_decl: "gate" IDENT ":" stype

?stype: sprod "-o" sprod                                  -> sarrow
      | sprod

?sprod: satom "*" sprod                                   -> stensor
      | satom

?satom: "unit"                                            -> sunit
      | UNIT_AT                                           -> sunit
      | "qubit"                                           -> tqubit
      | "(" stype ")"

IDENT: /[A-Za-z_][A-Za-z0-9_']*/
GATE: /#[A-Za-z_][A-Za-z0-9_]*/
UNIT_AT.2: /unit@[ulq]/
AT_MODE: /@[ulq]/
COMMENT: /--[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_parser = Lark(
    GRAMMAR,
    parser="lalr",
    start=["start_term", "start_circ", "start_type", "start_sig"],
    propagate_positions=True,
)


def _span(meta) -> Optional[Span]:
    line = getattr(meta, "line", None)
    return Span(line, meta.column) if line is not None else None


def _token_span(tok: Token) -> Span:
    return Span(tok.line, tok.column)


def _mode(tok: Token) -> Mode:
    return Mode(tok.value[-1])


@v_args(meta=True)
class _ToAst(Transformer):
    """Turn a lark parse tree into colored program nodes."""

    # -- starts ----------------------------------------------------------------

    def start_term(self, meta, children):
        return children[0]

    start_circ = start_term
    start_type = start_term

    def start_sig(self, meta, children):
        gates = {}
        for name_tok, ty in children:
            if name_tok.value in gates:
                raise SignatureError(f"duplicate gate {name_tok.value}", _token_span(name_tok))
            try:
                validate_gate_type(name_tok.value, ty)
            except SignatureError as exc:
                raise SignatureError(exc.message, _token_span(name_tok)) from None
            gates[name_tok.value] = ty
        return Signature(gates)

    # -- functional --------------------------------------------------------------

    def fn(self, meta, children):
        (name, annotation), body = children
        return Lam(name, body, F, annotation, span=_span(meta))

    def bare_binder(self, meta, children):
        return children[0].value, None

    def typed_binder(self, meta, children):
        return children[0].value, children[1]

    def ffmatch(self, meta, children):
        return self._match(meta, children, Family.FF)

    def qfmatch(self, meta, children):
        return self._match(meta, children, Family.QF)

    def _match(self, meta, children, family: Family):
        scrutinee, (kind, names, body) = children
        if kind == "unit":
            pattern = PUnit(body, family)
        elif kind == "pair":
            if names[0] == names[1]:
                raise ParseError(f"pattern binds {names[0]} twice", _span(meta))
            pattern = PPair(names[0], names[1], body, family)
        else:
            pattern = PDown(names[0], body, family)
        return Match(scrutinee, pattern, span=_span(meta))

    def unit_pat(self, meta, children):
        return "unit", (), children[0]

    def pair_pat(self, meta, children):
        left, right, body = children
        return "pair", (left.value, right.value), body

    def down_pat(self, meta, children):
        name, body = children
        return "down", (name.value,), body

    def fapp(self, meta, children):
        return App(children[0], children[1], F, span=_span(meta))

    def susp(self, meta, children):
        return SuspTerm(children[0], span=_span(meta))

    def down_intro(self, meta, children):
        return DownIntro(children[0], span=_span(meta))

    def fforce(self, meta, children):
        return Force(children[0], F, span=_span(meta))

    def fvar(self, meta, children):
        return Var(children[0].value, F, span=_span(meta))

    def funit(self, meta, children):
        return Unit(F, span=_span(meta))

    def fpair(self, meta, children):
        return Pair(children[0], children[1], F, span=_span(meta))

    def susp_circ(self, meta, children):
        return SuspCirc(children[0], span=_span(meta))

    def misplaced_gate(self, meta, children):
        raise ColorError(
            f"gate {children[0].value} can only appear inside a circuit", _span(meta)
        )

    # -- circuits ------------------------------------------------------------------

    def clam(self, meta, children):
        (name, annotation), body = children
        return Lam(name, body, C, annotation, span=_span(meta))

    def qqmatch(self, meta, children):
        return self._match(meta, children, Family.QQ)

    def capp_app(self, meta, children):
        return App(children[0], children[1], C, span=_span(meta))

    def cvar(self, meta, children):
        return Var(children[0].value, C, span=_span(meta))

    def cunit(self, meta, children):
        return Unit(C, span=_span(meta))

    def cpair(self, meta, children):
        return Pair(children[0], children[1], C, span=_span(meta))

    def gate(self, meta, children):
        return Gate(children[0].value[1:], span=_span(meta))

    def cforce(self, meta, children):
        return Force(children[0], C, span=_span(meta))

    def misplaced_circ(self, meta, children):
        raise ColorError(
            "circ { ... } is a functional term; use force { ... } inside circuits", _span(meta)
        )

    def misplaced_susp(self, meta, children):
        raise ColorError(
            "susp is a functional term and cannot appear inside a circuit", _span(meta)
        )

    def misplaced_down(self, meta, children):
        raise ColorError(
            "down is a functional term and cannot appear inside a circuit", _span(meta)
        )

    # -- types ---------------------------------------------------------------------

    def tarrow(self, meta, children):
        return Arrow(children[0], children[1], _mode(children[2]))

    def ttensor(self, meta, children):
        return Tensor(children[0], children[1], _mode(children[2]))

    def tup(self, meta, children):
        return self._shift(meta, up, children[0])

    def tdown(self, meta, children):
        return self._shift(meta, down, children[0])

    def _shift(self, meta, build, inner):
        try:
            return build(inner)
        except TypeMismatchError as exc:
            raise ParseError(exc.message, _span(meta)) from None

    def tunit(self, meta, children):
        return UnitAt(_mode(children[0]))

    def tqubit(self, meta, children):
        return QUBIT

    # -- signatures ----------------------------------------------------------------

    def gate_decl(self, meta, children):
        return children[0], children[1]

    def sarrow(self, meta, children):
        return Arrow(children[0], children[1], Mode.Q)

    def stensor(self, meta, children):
        return Tensor(children[0], children[1], Mode.Q)

    def sunit(self, meta, children):
        return UnitAt(Mode.Q)


_transformer = _ToAst()


def _run(text: str, start: str):
    try:
        tree = _parser.parse(text, start=start)
    except UnexpectedEOF as exc:
        lines = text.splitlines() or [""]
        raise ParseError(
            f"unexpected end of input, expected one of {sorted(exc.expected)}",
            Span(len(lines), len(lines[-1]) + 1),
        ) from None
    except UnexpectedInput as exc:
        found = getattr(exc, "token", None) or getattr(exc, "char", None) or "?"
        raise ParseError(f"unexpected input {str(found)!r}", Span(exc.line, exc.column)) from None
    try:
        return _transformer.transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, PqaError):
            raise exc.orig_exc from None
        raise


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def parse_type(text: str) -> TypeExpr:
    return _run(text, "start_type")


def parse_signature(text: str) -> Signature:
    return _run(text, "start_sig")


def parse_program(text: str, color: Optional[Color] = None) -> Program:
    """Parse a functional term or a circuit.

    With no *color*, a functional term is tried first and a circuit second,
    so ``#H`` or ``force { M }`` at top level read as circuits.
    """
    if color is F:
        return _run(text, "start_term")
    if color is C:
        return _run(text, "start_circ")
    try:
        return _run(text, "start_term")
    except PqaError as term_error:
        try:
            return _run(text, "start_circ")
        except PqaError as circ_error:
            if isinstance(term_error, ColorError):
                raise term_error from None
            raise _furthest(term_error, circ_error) from None


def _furthest(a: PqaError, b: PqaError) -> PqaError:
    def key(err: PqaError):
        return (err.span.line, err.span.column) if err.span else (0, 0)

    return b if key(b) > key(a) else a


_FIRST_TOKEN = re.compile(r"(?:\s|--[^\n]*)*([A-Za-z_#(]\w*)")


def parse(source: str, color: Optional[Color] = None) -> Union[Program, Signature]:
    """Parse a program or, when the text starts with ``gate``, a signature.

    Text such as ``x``, ``()`` or ``(x, y)`` is a functional term unless
    *color* is ``C``; printed circuits re-parse only with their color.
    """
    head = _FIRST_TOKEN.match(source)
    if head is not None and head.group(1) == "gate":
        return parse_signature(source)
    if head is None and not source.strip(" \t\r\n"):
        return parse_signature(source)
    return parse_program(source, color)
