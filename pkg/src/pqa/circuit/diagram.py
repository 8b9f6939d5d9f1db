"""Reading normal circuits as box-and-wire diagrams.

Normal circuits are matches on gate applications stacked around a final
bundle of wires, so extraction is a single left-to-right pass: each
neutral gate application becomes a box, pattern binders name the wires
it produces, pairs stack bundles vertically and ``()`` is the empty
bundle.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set, Tuple, Union

import networkx as nx

from pqa.dynamics.context import TypedNeutralContext
from pqa.encoding.stdlib import stdlib_signature
from pqa.errors import CircuitError
from pqa.syntax.printer import print_program
from pqa.syntax.signature import Signature
from pqa.syntax.terms import (
    App,
    C,
    Gate,
    Lam,
    Match,
    Pair,
    PPair,
    Program,
    PUnit,
    Unit,
    Var,
)
from pqa.syntax.types import Arrow, Mode, Qubit, Tensor, TypeExpr, UnitAt, is_simple, print_type

logger = logging.getLogger(__name__)

# A wire bundle: one wire name, the empty bundle ``()``, or a pair of bundles.
Bundle = Union[str, Tuple[()], Tuple["Bundle", "Bundle"]]


def flatten(bundle: Bundle) -> Tuple[str, ...]:
    """Wire names of *bundle*, left to right."""
    if isinstance(bundle, str):
        return (bundle,)
    return tuple(itertools.chain.from_iterable(flatten(b) for b in bundle))


def _rename_bundle(bundle: Bundle, ren: Dict[str, str]) -> Bundle:
    if isinstance(bundle, str):
        return ren.get(bundle, bundle)
    return tuple(_rename_bundle(b, ren) for b in bundle)


@dataclass(frozen=True)
class GateBox:
    gate: str
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]


@dataclass(frozen=True)
class Diagram:
    """Gates in application order between input and output wires."""

    input_labels: Tuple[str, ...] = ()
    gates: Tuple[GateBox, ...] = ()
    outputs: Bundle = ()
    inputs: Bundle = ()

    @property
    def output_labels(self) -> Tuple[str, ...]:
        return flatten(self.outputs)

    @property
    def is_empty(self) -> bool:
        return not self.gates and not self.input_labels and not self.output_labels

    def wires(self) -> Iterator[str]:
        yield from self.input_labels
        for box in self.gates:
            yield from box.outputs

    def check_linear(self) -> None:
        """Every wire is produced once and consumed at most once."""
        produced: Set[str] = set()
        for wire in self.wires():
            if wire in produced:
                raise CircuitError(f"wire {wire} is produced twice")
            produced.add(wire)
        consumed: Set[str] = set()
        sinks = [w for box in self.gates for w in box.inputs] + list(self.output_labels)
        for wire in sinks:
            if wire not in produced:
                raise CircuitError(f"wire {wire} is consumed but never produced")
            if wire in consumed:
                raise CircuitError(f"wire {wire} is consumed twice")
            consumed.add(wire)

    def renamed(self, ren: Dict[str, str]) -> "Diagram":
        return Diagram(
            input_labels=tuple(ren.get(w, w) for w in self.input_labels),
            gates=tuple(
                GateBox(
                    box.gate,
                    tuple(ren.get(w, w) for w in box.inputs),
                    tuple(ren.get(w, w) for w in box.outputs),
                )
                for box in self.gates
            ),
            outputs=_rename_bundle(self.outputs, ren),
            inputs=_rename_bundle(self.inputs, ren),
        )

    def to_graph(self) -> nx.DiGraph:
        """Inputs, gates and outputs as nodes; wires as port-labelled edges."""
        graph = nx.DiGraph()
        source: Dict[str, Tuple[object, int]] = {}
        for i, wire in enumerate(self.input_labels):
            node = ("in", i)
            graph.add_node(node, kind=f"in:{i}")
            source[wire] = (node, 0)
        for index, box in enumerate(self.gates):
            node = ("gate", index)
            graph.add_node(node, kind=f"gate:{box.gate}")
            for port, wire in enumerate(box.inputs):
                _wire_edge(graph, source[wire], (node, port))
            for port, wire in enumerate(box.outputs):
                source[wire] = (node, port)
        for j, wire in enumerate(self.output_labels):
            node = ("out", j)
            graph.add_node(node, kind=f"out:{j}")
            _wire_edge(graph, source[wire], (node, 0))
        return graph


def _wire_edge(graph: nx.DiGraph, src: Tuple[object, int], dst: Tuple[object, int]) -> None:
    (u, out_port), (v, in_port) = src, dst
    if graph.has_edge(u, v):
        ports = graph.edges[u, v]["ports"] + ((out_port, in_port),)
        graph.edges[u, v]["ports"] = tuple(sorted(ports))
    else:
        graph.add_edge(u, v, ports=((out_port, in_port),))


def diagram_equiv(d1: Diagram, d2: Diagram) -> bool:
    """Equal up to wire renaming and the order of independent gates."""
    if len(d1.gates) != len(d2.gates) or len(d1.input_labels) != len(d2.input_labels):
        return False
    return nx.is_isomorphic(
        d1.to_graph(),
        d2.to_graph(),
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["ports"] == b["ports"],
    )


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------


@dataclass
class _Extractor:
    sig: Signature
    env: Dict[str, Bundle] = field(default_factory=dict)
    gates: List[GateBox] = field(default_factory=list)
    aliases: Dict[str, str] = field(default_factory=dict)
    counter: Iterator[int] = field(default_factory=lambda: itertools.count(1))
    taken: Set[str] = field(default_factory=set)

    def fresh_bundle(self, ty: TypeExpr, base: str) -> Bundle:
        match ty:
            case UnitAt():
                return ()
            case Qubit():
                wire = f"{base}{next(self.counter)}"
                while wire in self.taken:
                    wire = f"{base}{next(self.counter)}"
                self.taken.add(wire)
                return wire
            case Tensor(left=a, right=b):
                return (self.fresh_bundle(a, base), self.fresh_bundle(b, base))
        raise CircuitError(f"not a wire type: {print_type(ty)}")

    def input_bundle(self, ty: TypeExpr, name: str) -> Bundle:
        match ty:
            case UnitAt():
                return ()
            case Qubit():
                self.taken.add(name)
                return name
            case Tensor(left=a, right=b):
                return (self.input_bundle(a, f"{name}.0"), self.input_bundle(b, f"{name}.1"))
        raise CircuitError(f"not a wire type: {print_type(ty)}")

    def bind(self, name: str, bundle: Bundle) -> None:
        self.env[name] = bundle
        if isinstance(bundle, str):
            self.aliases.setdefault(bundle, name)

    def use(self, name: str) -> Bundle:
        if name not in self.env:
            raise CircuitError(f"circuit variable {name} is unbound or already used")
        return self.env.pop(name)

    def bundle(self, c: Program) -> Bundle:
        match c:
            case Var(name=n, color=color) if color is C:
                return self.use(n)
            case Unit(color=color) if color is C:
                return ()
            case Pair(left=a, right=b, color=color) if color is C:
                return (self.bundle(a), self.bundle(b))
            case App(fn=Gate(name=g), arg=a, color=color) if color is C:
                ty = self.sig.get(g)
                if ty is None:
                    raise CircuitError(f"unknown gate #{g}")
                inputs = flatten(self.bundle(a))
                out = self.fresh_bundle(ty.cod, "w")
                self.gates.append(GateBox(g, inputs, flatten(out)))
                return out
            case Match(scrutinee=s, pattern=PPair(left=x, right=y, body=body)):
                scrutinee = self.bundle(s)
                if isinstance(scrutinee, str) or len(scrutinee) != 2:
                    raise CircuitError(f"pair pattern on a non-pair bundle in {print_program(c)}")
                self.bind(x, scrutinee[0])
                self.bind(y, scrutinee[1])
                return self.bundle(body)
            case Match(scrutinee=s, pattern=PUnit(body=body)):
                if self.bundle(s) != ():
                    raise CircuitError(f"unit pattern on a nonempty bundle in {print_program(c)}")
                return self.bundle(body)
        raise CircuitError(f"not a normal circuit: {print_program(c)}")

    def readable(self, diagram: Diagram) -> Diagram:
        """Rename generated wires after the pattern binder that first named them."""
        taken = set(diagram.wires())
        ren: Dict[str, str] = {}
        for wire in diagram.wires():
            alias = self.aliases.get(wire)
            if alias is not None and alias != wire and alias not in taken:
                ren[wire] = alias
                taken.add(alias)
        return diagram.renamed(ren)


def extract_diagram(
    psi: TypedNeutralContext,
    v: Program,
    ty: Optional[TypeExpr] = None,
    sig: Optional[Signature] = None,
) -> Diagram:
    """The diagram of a normal circuit *v* over the wires in *psi*.

    *v* is either a circuit of simple type whose free variables are typed
    by *psi*, or a circuit function (a ``lam`` or a bare gate) whose input
    wires are named after its binder.  *ty* is needed only for ``lam``
    without a binder annotation.
    """
    if v.color is not C:
        raise CircuitError(f"not a circuit: {print_program(v)}")
    if ty is not None and not (is_simple(ty) or isinstance(ty, Arrow) and ty.mode is Mode.Q):
        raise CircuitError(f"cannot draw a circuit of type {print_type(ty)}")
    ex = _Extractor(sig if sig is not None else stdlib_signature())
    for name, wire_ty in psi:
        ex.bind(name, ex.input_bundle(wire_ty, name))
    bundles = tuple(ex.env[name] for name, _ in psi)
    inputs: Bundle = bundles[0] if len(bundles) == 1 else bundles
    body = v
    match v:
        case Lam(binder=x, body=b, annotation=annotation):
            dom = annotation if annotation is not None else getattr(ty, "dom", None)
            if dom is None:
                raise CircuitError(f"missing input type for lam {x}")
            inputs = ex.input_bundle(dom, x)
            ex.bind(x, inputs)
            body = b
        case Gate(name=g):
            gate_ty = ex.sig.get(g)
            if gate_ty is None:
                raise CircuitError(f"unknown gate #{g}")
            inputs = ex.input_bundle(gate_ty.dom, "x")
            ex.bind("x", inputs)
            body = App(v, Var("x", C), C)
    outputs = ex.bundle(body)
    if ex.env:
        raise CircuitError(f"unused circuit variables: {', '.join(sorted(ex.env))}")
    diagram = ex.readable(
        Diagram(
            input_labels=flatten(inputs),
            gates=tuple(ex.gates),
            outputs=outputs,
            inputs=inputs,
        )
    )
    diagram.check_linear()
    logger.debug("extracted %d gates over %d inputs", len(diagram.gates), len(diagram.input_labels))
    return diagram
