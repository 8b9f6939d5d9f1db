"""Source types, their encoding, and the box/apply combinators."""

from pqa.encoding.combinators import (
    COMBINATORS,
    combinator_type,
    mk_apply,
    mk_box,
    mk_BOX,
    mk_compose,
    mk_lax,
    mk_lax_simple,
    mk_oplax,
    mk_oplax_simple,
)
from pqa.encoding.pqtypes import (
    I,
    PBang,
    PCirc,
    PLolli,
    PQType,
    PQubit,
    PTensor,
    PUnitType,
    Q,
    enc_type,
    encode_simple,
    is_simple_pq,
    simple_pqtypes,
)
from pqa.encoding.stdlib import (
    STDLIB_PATH,
    load_signature_file,
    load_stdlib,
    stdlib_signature,
)

__all__ = [
    "COMBINATORS",
    "I",
    "PBang",
    "PCirc",
    "PLolli",
    "PQType",
    "PQubit",
    "PTensor",
    "PUnitType",
    "Q",
    "STDLIB_PATH",
    "combinator_type",
    "enc_type",
    "encode_simple",
    "is_simple_pq",
    "load_signature_file",
    "load_stdlib",
    "mk_BOX",
    "mk_apply",
    "mk_box",
    "mk_compose",
    "mk_lax",
    "mk_lax_simple",
    "mk_oplax",
    "mk_oplax_simple",
    "simple_pqtypes",
    "stdlib_signature",
]
