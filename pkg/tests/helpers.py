from pathlib import Path

from pqa.syntax.parser import parse_program, parse_type

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def prog(text, color=None):
    return parse_program(text, color)


def ty(text):
    return parse_type(text)
