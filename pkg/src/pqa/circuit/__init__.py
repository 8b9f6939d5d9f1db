"""Normal-form shapes and circuit diagrams."""

from pqa.circuit.diagram import Diagram, GateBox, diagram_equiv, extract_diagram, flatten
from pqa.circuit.grammar import NormalFormReport, check_normal_grammar
from pqa.circuit.render import render_ascii, render_dot

__all__ = [
    "Diagram",
    "GateBox",
    "NormalFormReport",
    "check_normal_grammar",
    "diagram_equiv",
    "extract_diagram",
    "flatten",
    "render_ascii",
    "render_dot",
]
