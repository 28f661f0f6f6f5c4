"""
Blow-up digraphs and their optical-circuit netlists.

Each vertex ``u`` of degree ``kappa`` is replaced by an island: the directed
cycle ``(u;0) -> (u;1) -> ... -> (u;kappa-1) -> (u;0)``. The island vertex
``(u;j)`` is where the original incoming arc labelled ``j`` lands, so the
original arc ``u -> v`` becomes the retained arc ``(u;xi_u(v)) -> (v;xi_v(u))``
and the tail of ``u`` enters and leaves at ``(u;xi_u(tail))``.

The circuit graph replaces every island vertex by a half-wave plate (HWP)
and every corner between ``(u;j)`` and ``(u;j+1)`` by a polarizing beam
splitter (PBS). Inter-island arcs leave from the PBS after the HWP they
start at and arrive at the PBS before the HWP they end at.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .errors import CircwalkError, NotTwoRegular, UnsupportedFormat
from .graph import Labeling, SymmetricDigraph, validate_labeling

IslandVertex = tuple[int, int]

CYCLE = "cycle"
RETAINED = "retained"
TAIL_IN = "tail_in"
TAIL_OUT = "tail_out"


@dataclass(frozen=True)
class BlowupArc:
    kind: str
    origin: Optional[IslandVertex]
    terminus: Optional[IslandVertex]
    source_arc: Optional[int] = None


@dataclass(frozen=True)
class BlowupGraph:
    """Islands, their cycle arcs, and the retained original arcs.

    Arc order: cycle arcs (the ``j``-th arc of island ``u`` ends at
    ``(u;j)``), retained arcs by original arc id, tail inflows, tail outflows.
    """

    degrees: tuple[int, ...]
    arcs: tuple[BlowupArc, ...]
    tail_vertex: tuple[IslandVertex, ...]

    @property
    def island_vertices(self) -> list[IslandVertex]:
        return [(u, j) for u, k in enumerate(self.degrees) for j in range(k)]

    @property
    def cycle_arcs(self) -> list[BlowupArc]:
        return [a for a in self.arcs if a.kind == CYCLE]

    @property
    def retained_arcs(self) -> list[BlowupArc]:
        return [a for a in self.arcs if a.kind == RETAINED]

    @property
    def n_islands(self) -> int:
        return len(self.degrees)


def blow_up(graph: SymmetricDigraph, labeling: Labeling) -> BlowupGraph:
    validate_labeling(graph, labeling)
    arcs = []
    for u in graph.vertices:
        k = graph.degree(u)
        for j in range(k):
            arcs.append(BlowupArc(CYCLE, (u, (j - 1) % k), (u, j)))
    for e in graph.internal_arcs:
        u, v = e.origin, e.terminus
        arcs.append(BlowupArc(RETAINED, (u, labeling(u, e.inverse)), (v, labeling(v, e.id)), e.id))
    tail_vertex = tuple((u, labeling(u, graph.tail_in(u))) for u in graph.vertices)
    for u in graph.vertices:
        arcs.append(BlowupArc(TAIL_IN, None, tail_vertex[u], graph.tail_in(u)))
    for u in graph.vertices:
        arcs.append(BlowupArc(TAIL_OUT, tail_vertex[u], None, graph.tail_out(u)))
    return BlowupGraph(
        degrees=tuple(graph.degree(u) for u in graph.vertices),
        arcs=tuple(arcs),
        tail_vertex=tail_vertex,
    )


def verify_two_regular(B: BlowupGraph) -> None:
    """Every island vertex has one cycle and one non-cycle arc in each direction."""
    kinds_in: dict = {v: Counter() for v in B.island_vertices}
    kinds_out: dict = {v: Counter() for v in B.island_vertices}
    for a in B.arcs:
        outer = CYCLE if a.kind == CYCLE else "other"
        if a.terminus is not None:
            if a.terminus not in kinds_in:
                raise NotTwoRegular(a.terminus, f"arc ends at unknown vertex {a.terminus}")
            kinds_in[a.terminus][outer] += 1
        if a.origin is not None:
            if a.origin not in kinds_out:
                raise NotTwoRegular(a.origin, f"arc starts at unknown vertex {a.origin}")
            kinds_out[a.origin][outer] += 1
    expected = Counter({CYCLE: 1, "other": 1})
    for v in B.island_vertices:
        if kinds_in[v] != expected or kinds_out[v] != expected:
            raise NotTwoRegular(v)


def contract_islands(B: BlowupGraph) -> set[tuple[int, int]]:
    """Project retained arcs onto island pairs ``(origin island, terminus island)``."""
    return {(a.origin[0], a.terminus[0]) for a in B.retained_arcs}


# ---------------------------------------------------------------------------
# optical circuit


@dataclass(frozen=True)
class CircuitNode:
    kind: str  # "HWP", "PBS", "SOURCE" or "SINK"
    vertex: int
    label: int = -1

    @property
    def name(self) -> str:
        if self.kind in ("SOURCE", "SINK"):
            return f"{self.kind}_{self.vertex}"
        return f"{self.kind}_{self.vertex}_{self.label}"


@dataclass(frozen=True)
class CircuitArc:
    kind: str  # "cycle", "inter-island" or "tail"
    origin: CircuitNode
    terminus: CircuitNode


@dataclass(frozen=True)
class OpticalCircuit:
    nodes: tuple[CircuitNode, ...]
    arcs: tuple[CircuitArc, ...]

    @property
    def hwp_nodes(self) -> list[CircuitNode]:
        return [n for n in self.nodes if n.kind == "HWP"]

    @property
    def pbs_nodes(self) -> list[CircuitNode]:
        return [n for n in self.nodes if n.kind == "PBS"]


def compile_circuit(B: BlowupGraph, labeling: Optional[Labeling] = None) -> OpticalCircuit:
    """Deform the blow-up graph into the HWP/PBS circuit graph.

    The labeling is already encoded in ``B``; the argument is accepted so
    callers can pass the pair they built ``B`` from.
    """
    nodes: list[CircuitNode] = []
    arcs: list[CircuitArc] = []

    def pbs(u, j):
        return CircuitNode("PBS", u, j % B.degrees[u])

    for u, k in enumerate(B.degrees):
        for j in range(k):
            hwp = CircuitNode("HWP", u, j)
            nodes.append(hwp)
            nodes.append(pbs(u, j))
            arcs.append(CircuitArc("cycle", hwp, pbs(u, j)))
            arcs.append(CircuitArc("cycle", pbs(u, j), CircuitNode("HWP", u, (j + 1) % k)))
    for u in range(B.n_islands):
        nodes.append(CircuitNode("SOURCE", u))
        nodes.append(CircuitNode("SINK", u))
    for a in B.arcs:
        if a.kind == RETAINED:
            (u, j), (v, l) = a.origin, a.terminus
            arcs.append(CircuitArc("inter-island", pbs(u, j), pbs(v, l - 1)))
        elif a.kind == TAIL_IN:
            u, j = a.terminus
            arcs.append(CircuitArc("tail", CircuitNode("SOURCE", u), pbs(u, j - 1)))
        elif a.kind == TAIL_OUT:
            u, j = a.origin
            arcs.append(CircuitArc("tail", pbs(u, j), CircuitNode("SINK", u)))
    return OpticalCircuit(tuple(nodes), tuple(arcs))


NETLIST_FORMAT = "circwalk-netlist"
NETLIST_VERSION = 1

_DOT_SHAPES = {"HWP": "box", "PBS": "diamond", "SOURCE": "circle", "SINK": "doublecircle"}


def emit_netlist(C: OpticalCircuit, format: str = "dot") -> str:
    """Serialize a circuit as Graphviz DOT or JSON.

    The output depends only on ``C`` (node and arc order are preserved), so
    equal circuits give byte-identical text.
    """
    if format == "json":
        doc = {
            "format": NETLIST_FORMAT,
            "version": NETLIST_VERSION,
            "nodes": [{"id": n.name, "kind": n.kind, "vertex": n.vertex, "label": n.label} for n in C.nodes],
            "arcs": [{"origin": a.origin.name, "terminus": a.terminus.name, "kind": a.kind} for a in C.arcs],
        }
        return json.dumps(doc, indent=1) + "\n"
    if format == "dot":
        lines = ["digraph optical_circuit {", "  rankdir=LR;"]
        for n in C.nodes:
            attrs = f'kind="{n.kind}", shape={_DOT_SHAPES[n.kind]}, vertex={n.vertex}'
            if n.label >= 0:
                attrs += f", label_index={n.label}"
            lines.append(f'  "{n.name}" [{attrs}];')
        for a in C.arcs:
            lines.append(f'  "{a.origin.name}" -> "{a.terminus.name}" [kind="{a.kind}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise UnsupportedFormat(f"unsupported netlist format {format!r}")


def load_netlist(text: str) -> OpticalCircuit:
    """Parse the JSON netlist emitted by :func:`emit_netlist`."""
    doc = json.loads(text)
    if doc.get("format") != NETLIST_FORMAT:
        raise CircwalkError("not a circwalk netlist")
    by_id = {}
    nodes = []
    for n in doc["nodes"]:
        node = CircuitNode(n["kind"], int(n["vertex"]), int(n["label"]))
        by_id[n["id"]] = node
        nodes.append(node)
    arcs = tuple(CircuitArc(a["kind"], by_id[a["origin"]], by_id[a["terminus"]]) for a in doc["arcs"])
    return OpticalCircuit(tuple(nodes), arcs)
