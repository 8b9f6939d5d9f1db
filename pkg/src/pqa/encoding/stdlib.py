"""Gate signature files."""

from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path
from typing import Union

from pqa.syntax.parser import parse_signature
from pqa.syntax.signature import Signature

logger = logging.getLogger(__name__)

STDLIB_PATH = Path(__file__).resolve().with_name("stdlib.sig")


def load_stdlib(sig_file: str) -> Signature:
    """Parse signature text such as ``gate H : qubit -o qubit``."""
    return parse_signature(sig_file)


def load_signature_file(path: Union[str, Path]) -> Signature:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Signature file not found: {path}")
    sig = load_stdlib(path.read_text(encoding="utf-8"))
    logger.debug("Loaded %d gates from %s", len(sig), path)
    return sig


@lru_cache(maxsize=1)
def stdlib_signature() -> Signature:
    """The packaged standard library (H, X, Y, Z, S, T, CNOT)."""
    return load_signature_file(STDLIB_PATH)
