"""
Internal graphs with tails and arc labelings.

A finite simple graph is stored as a symmetric digraph: every undirected
edge ``{i, j}`` becomes the pair of arcs ``i -> j`` and ``j -> i``. Each
vertex additionally carries one semi-infinite tail, represented only by its
two boundary arcs: the inflow arc (tail -> u) and the outflow arc
(u -> tail). Tail endpoints are encoded as ``None``.

Arc ids are dense. Internal arcs come first (edge ``k`` gives arcs ``2k``
and ``2k + 1``), followed by the ``n`` inflow arcs and then the ``n``
outflow arcs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from .errors import DisconnectedGraph, DuplicateEdge, GraphError, NotBijective, SelfLoop

TAIL = "tail"


@dataclass(frozen=True)
class Arc:
    id: int
    origin: Optional[int]
    terminus: Optional[int]
    inverse: int

    @property
    def is_internal(self) -> bool:
        return self.origin is not None and self.terminus is not None


@dataclass(frozen=True)
class SymmetricDigraph:
    """Finite connected simple graph with one tail per vertex.

    Use :func:`build_graph` rather than constructing this directly.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    arcs: tuple[Arc, ...]
    _incoming: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def n_internal(self) -> int:
        return 2 * len(self.edges)

    @property
    def internal_arcs(self) -> tuple[Arc, ...]:
        return self.arcs[: self.n_internal]

    def tail_in(self, u: int) -> int:
        """Id of the inflow boundary arc entering ``u``."""
        return self.n_internal + u

    def tail_out(self, u: int) -> int:
        """Id of the outflow boundary arc leaving ``u``."""
        return self.n_internal + self.n_vertices + u

    def incoming(self, u: int) -> tuple[int, ...]:
        """Arc ids with terminus ``u``, tail inflow included."""
        return self._incoming[u]

    def degree(self, u: int) -> int:
        return len(self._incoming[u])

    def arc_between(self, origin: int, terminus: int) -> int:
        for a in self._incoming[terminus]:
            if self.arcs[a].origin == origin:
                return a
        raise KeyError(f"no arc {origin} -> {terminus}")

    def neighbors(self, u: int) -> list[int]:
        return sorted(self.arcs[a].origin for a in self._incoming[u] if self.arcs[a].origin is not None)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def build_graph(edges: Iterable[Sequence[int]], n_vertices: Optional[int] = None) -> SymmetricDigraph:
    """Build a :class:`SymmetricDigraph` from unordered vertex pairs.

    Parameters
    ----------
    edges
        Iterable of pairs ``(i, j)`` over vertices ``0..N-1``.
    n_vertices
        Number of vertices. Inferred as ``max index + 1`` when omitted.

    Raises
    ------
    SelfLoop, DuplicateEdge, DisconnectedGraph
    """
    pairs = []
    seen = set()
    for e in edges:
        i, j = (int(x) for x in e)
        if i == j:
            raise SelfLoop(f"self-loop at vertex {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(f"duplicate edge {key}")
        seen.add(key)
        pairs.append((i, j))
    if n_vertices is None:
        n_vertices = 1 + max((max(p) for p in pairs), default=0)
    if n_vertices < 1:
        raise GraphError("graph needs at least one vertex")
    for i, j in pairs:
        if not (0 <= i < n_vertices and 0 <= j < n_vertices):
            raise GraphError(f"edge ({i}, {j}) references a vertex outside 0..{n_vertices - 1}")

    g = nx.Graph()
    g.add_nodes_from(range(n_vertices))
    g.add_edges_from(pairs)
    if not nx.is_connected(g):
        raise DisconnectedGraph("graph is not connected")

    arcs = []
    for k, (i, j) in enumerate(pairs):
        arcs.append(Arc(2 * k, i, j, 2 * k + 1))
        arcs.append(Arc(2 * k + 1, j, i, 2 * k))
    m = len(arcs)
    for u in range(n_vertices):
        arcs.append(Arc(m + u, None, u, m + n_vertices + u))
    for u in range(n_vertices):
        arcs.append(Arc(m + n_vertices + u, u, None, m + u))

    incoming: list[list[int]] = [[] for _ in range(n_vertices)]
    for a in arcs:
        if a.terminus is not None:
            incoming[a.terminus].append(a.id)
    return SymmetricDigraph(
        n_vertices=n_vertices,
        edges=tuple(pairs),
        arcs=tuple(arcs),
        _incoming=tuple(tuple(x) for x in incoming),
    )


def complete_graph(n: int) -> SymmetricDigraph:
    return build_graph([(i, j) for i in range(n) for j in range(i + 1, n)], n_vertices=n)


class Labeling:
    """Per-vertex bijections from incoming arcs to ``0..deg(u)-1``.

    ``labels[u]`` maps arc id to label. The constructor does not validate;
    call :func:`validate_labeling` for that.
    """

    def __init__(self, graph: SymmetricDigraph, labels: Sequence[Mapping[int, int]]):
        self.graph = graph
        self.labels = tuple(dict(m) for m in labels)

    def __call__(self, u: int, arc: int) -> int:
        return self.labels[u][arc]

    def arc_at(self, u: int, label: int) -> int:
        """Inverse map: the incoming arc of ``u`` carrying ``label``."""
        for a, j in self.labels[u].items():
            if j == label:
                return a
        raise KeyError(f"vertex {u} has no arc labelled {label}")

    def ordered_arcs(self, u: int) -> list[int]:
        """Incoming arcs of ``u`` sorted by label."""
        return sorted(self.labels[u], key=self.labels[u].__getitem__)

    def of_origin(self, u: int, origin) -> int:
        """Label at ``u`` of the arc coming from ``origin`` (a vertex or ``"tail"``)."""
        if origin == TAIL or origin is None:
            return self.labels[u][self.graph.tail_in(u)]
        return self.labels[u][self.graph.arc_between(origin, u)]

    @classmethod
    def from_origins(cls, graph: SymmetricDigraph, spec: Mapping[int, Mapping | Sequence]) -> "Labeling":
        """Build a labeling keyed by origin vertex instead of arc id.

        ``spec[u]`` is either a mapping ``origin -> label`` or a sequence whose
        position ``j`` holds the origin of the arc labelled ``j``. Origins are
        vertex ids or the string ``"tail"``.
        """
        labels = []
        for u in graph.vertices:
            entry = spec.get(u, spec.get(str(u))) if isinstance(spec, Mapping) else spec[u]
            if entry is None:
                raise GraphError(f"labeling missing vertex {u}")
            pairs = entry.items() if isinstance(entry, Mapping) else ((o, j) for j, o in enumerate(entry))
            m = {}
            for origin, j in pairs:
                if origin != TAIL:
                    origin = int(origin)
                try:
                    a = graph.tail_in(u) if origin == TAIL else graph.arc_between(origin, u)
                except KeyError:
                    raise GraphError(f"vertex {u} has no incoming arc from {origin!r}") from None
                m[a] = int(j)
            labels.append(m)
        return cls(graph, labels)

    def to_origins(self) -> dict[int, list]:
        out = {}
        for u in self.graph.vertices:
            out[u] = [TAIL if self.graph.arcs[a].origin is None else self.graph.arcs[a].origin
                      for a in self.ordered_arcs(u)]
        return out

    def __eq__(self, other):
        return isinstance(other, Labeling) and self.labels == other.labels

    def __repr__(self):
        return f"Labeling({self.to_origins()!r})"


def default_labeling(graph: SymmetricDigraph) -> Labeling:
    """Deterministic labeling: incoming arcs by ascending origin, tail at ``min(u, deg-1)``.

    On the complete graph this gives ``xi_i((i, j)) = j`` with the tail of
    ``i`` labelled ``i``.
    """
    labels = []
    for u in graph.vertices:
        internal = sorted(
            (a for a in graph.incoming(u) if graph.arcs[a].origin is not None),
            key=lambda a: graph.arcs[a].origin,
        )
        pos = min(u, len(internal))
        order = internal[:pos] + [graph.tail_in(u)] + internal[pos:]
        labels.append({a: j for j, a in enumerate(order)})
    return Labeling(graph, labels)


def validate_labeling(graph: SymmetricDigraph, labeling: Labeling) -> None:
    """Raise :class:`NotBijective` unless every ``xi_u`` is a bijection."""
    if len(labeling.labels) != graph.n_vertices:
        raise GraphError("labeling does not cover every vertex")
    for u in graph.vertices:
        m = labeling.labels[u]
        if set(m) != set(graph.incoming(u)):
            raise NotBijective(u, f"labeling at vertex {u} does not cover exactly its incoming arcs")
        if sorted(m.values()) != list(range(graph.degree(u))):
            raise NotBijective(u)


def load_graph(doc: Mapping | str) -> tuple[SymmetricDigraph, Labeling]:
    """Read the graph JSON document.

    ``{"vertices": N, "edges": [[i, j], ...], "labeling": {...}}`` where the
    optional labeling follows :meth:`Labeling.from_origins`. Without it the
    default labeling is used.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    graph = build_graph(doc["edges"], n_vertices=doc.get("vertices"))
    if doc.get("labeling") is None:
        labeling = default_labeling(graph)
    else:
        labeling = Labeling.from_origins(graph, doc["labeling"])
    validate_labeling(graph, labeling)
    return graph, labeling


def dump_graph(graph: SymmetricDigraph, labeling: Optional[Labeling] = None) -> dict:
    doc = {"vertices": graph.n_vertices, "edges": [list(e) for e in graph.edges]}
    if labeling is not None:
        doc["labeling"] = {str(u): v for u, v in labeling.to_origins().items()}
    return doc
