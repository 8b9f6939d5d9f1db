"""Text renderings of circuit diagrams."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import networkx as nx

from pqa.circuit.diagram import Diagram, GateBox

# ---------------------------------------------------------------------------
# Layout
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Placed:
    box: GateBox
    column: int
    tracks: Tuple[int, ...]

    @property
    def span(self) -> Tuple[int, int]:
        return (min(self.tracks), max(self.tracks)) if self.tracks else (-1, -1)


@dataclass
class _Layout:
    placed: List[_Placed]
    track_of: Dict[str, int]
    born: Dict[str, int]
    dies: Dict[str, int]
    columns: int
    tracks: int


def _gate_dag(d: Diagram) -> nx.DiGraph:
    dag = nx.DiGraph()
    producer: Dict[str, int] = {}
    for index, box in enumerate(d.gates):
        dag.add_node(index)
        for wire in box.inputs:
            if wire in producer:
                dag.add_edge(producer[wire], index)
        for wire in box.outputs:
            producer[wire] = index
    return dag


def _overlaps(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def _layout(d: Diagram) -> _Layout:
    track_of: Dict[str, int] = {w: i for i, w in enumerate(d.input_labels)}
    born: Dict[str, int] = {w: -1 for w in d.input_labels}
    dies: Dict[str, int] = {}
    next_track = len(d.input_labels)
    dag = _gate_dag(d)
    column_of: Dict[int, int] = {}
    placed: List[_Placed] = []
    by_column: Dict[int, List[_Placed]] = {}
    # Generations first, then source order, keeps the drawing stable.
    order = [i for generation in nx.topological_generations(dag) for i in sorted(generation)]
    for index in order:
        box = d.gates[index]
        in_tracks = [track_of[w] for w in box.inputs]
        out_tracks: List[int] = []
        for k, wire in enumerate(box.outputs):
            if k < len(in_tracks):
                track_of[wire] = in_tracks[k]
            else:
                track_of[wire] = next_track
                next_track += 1
            out_tracks.append(track_of[wire])
        item = _Placed(box, 0, tuple(in_tracks + out_tracks))
        column = max((column_of[p] + 1 for p in dag.predecessors(index)), default=0)
        while any(_overlaps(item.span, other.span) for other in by_column.get(column, [])):
            column += 1
        item = _Placed(box, column, item.tracks)
        column_of[index] = column
        by_column.setdefault(column, []).append(item)
        placed.append(item)
        for wire in box.inputs:
            dies[wire] = column
        for wire in box.outputs:
            born[wire] = column
    columns = max((p.column + 1 for p in placed), default=0)
    for wire in d.output_labels:
        dies[wire] = columns
    return _Layout(placed, track_of, born, dies, columns, next_track)


# ---------------------------------------------------------------------------
# ASCII
# ---------------------------------------------------------------------------


def render_ascii(d: Diagram) -> str:
    """Fixed-width drawing: one row per wire track, gates left to right by depth.

    Each gate is drawn as ``[NAME]`` on every track it touches and as a
    ``|`` on tracks its span crosses.
    """
    if d.is_empty:
        return ""
    lay = _layout(d)
    widths = [0] * lay.columns
    at: Dict[Tuple[int, int], _Placed] = {}
    for item in lay.placed:
        widths[item.column] = max(widths[item.column], len(item.box.gate) + 2)
        lo, hi = item.span
        for track in range(lo, hi + 1):
            at[(item.column, track)] = item

    # Which wire occupies each track at each column, -1 meaning "before the first gate".
    segments: Dict[int, List[Tuple[str, int, int]]] = {}
    for wire, track in lay.track_of.items():
        segments.setdefault(track, []).append((wire, lay.born[wire], lay.dies.get(wire, -2)))

    def live(track: int, column: int) -> bool:
        return any(b < column < e for _, b, e in segments.get(track, []))

    def crosses(track: int, boundary: int) -> bool:
        return any(b < boundary <= e for _, b, e in segments.get(track, []))

    left = max((len(w) for w in d.input_labels), default=0)
    outputs = set(d.output_labels)
    rows: List[str] = []
    for track in range(lay.tracks):
        start = next((w for w in d.input_labels if lay.track_of[w] == track), "")
        parts = [start.rjust(left) + " " if left else ""]
        for column in range(lay.columns):
            parts.append("--" if crosses(track, column) else "  ")
            width = widths[column]
            item = at.get((column, track))
            if item is not None and track in item.tracks:
                parts.append(f"[{item.box.gate.center(width - 2)}]")
            elif item is not None:
                fill = "-" if live(track, column) else " "
                parts.append((fill * ((width - 1) // 2)) + "|" + fill * (width // 2))
            else:
                parts.append(("-" if live(track, column) else " ") * width)
        ending = [w for w, _, e in segments.get(track, []) if w in outputs]
        parts.append("-- " + ending[0] if ending else "")
        rows.append("".join(parts).rstrip())
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(d: Diagram) -> str:
    """Graphviz source: gates as boxes, wires as labelled edges, ranked left to right."""
    lines = ["digraph circuit {", "  rankdir=LR;"]
    if d.is_empty:
        lines.append("}")
        return "\n".join(lines) + "\n"
    lines.append("  node [shape=box];")
    source: Dict[str, str] = {}
    for i, wire in enumerate(d.input_labels):
        lines.append(f"  in{i} [label={_quote(wire)}, shape=plaintext];")
        source[wire] = f"in{i}"
    edges: List[str] = []
    for index, box in enumerate(d.gates):
        node = f"g{index}"
        lines.append(f"  {node} [label={_quote(box.gate)}];")
        for wire in box.inputs:
            edges.append(f"  {source[wire]} -> {node} [label={_quote(wire)}];")
        for wire in box.outputs:
            source[wire] = node
    for j, wire in enumerate(d.output_labels):
        lines.append(f"  out{j} [label={_quote(wire)}, shape=plaintext];")
        edges.append(f"  {source[wire]} -> out{j} [label={_quote(wire)}];")
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
