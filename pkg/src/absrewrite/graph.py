"""Finite edge-labelled directed multigraphs and graph morphisms.

Graphs are immutable values.  Node and edge identifiers are opaque strings,
kept in ascending order so that every search over them is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional


class GraphError(ValueError):
    """Raised for structurally invalid graphs or morphisms."""


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    tgt: str
    label: str


class Graph:
    """A labelled directed multigraph ``(V, E, src, tgt, lab)``.

    The constructor stores what it is given; call :func:`validate` (or use
    :meth:`build`) to check the structural invariants.
    """

    __slots__ = ("nodes", "edges", "edge_ids", "_edge_index", "_nodeset", "_hash")

    def __init__(self, nodes: Iterable[str] = (), edges: Iterable[Edge] = ()):
        self.nodes: tuple[str, ...] = tuple(sorted(nodes))
        self.edges: tuple[Edge, ...] = tuple(sorted(edges))
        self.edge_ids: tuple[str, ...] = tuple(e.id for e in self.edges)
        self._edge_index = {e.id: e for e in self.edges}
        self._nodeset = frozenset(self.nodes)
        self._hash: Optional[int] = None

    @classmethod
    def build(cls, nodes: Iterable[str], edges: Iterable[tuple[str, str, str, str] | Edge],
              labels: Optional[Iterable[str]] = None) -> "Graph":
        """Construct and validate.  Edges may be given as ``(id, src, tgt, label)``."""
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        g = cls(nodes, es)
        validate(g, labels)
        return g

    def edge(self, eid: str) -> Edge:
        return self._edge_index[eid]

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(e.label for e in self.edges)

    def has_node(self, v: str) -> bool:
        return v in self._nodeset

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_index

    def size(self) -> tuple[int, int]:
        return len(self.nodes), len(self.edges)

    def out_degree(self, v: str) -> int:
        return sum(1 for e in self.edges if e.src == v)

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.src == v or e.tgt == v]

    def subgraph(self, nodes: Iterable[str], edges: Iterable[str]) -> "Graph":
        es = [self._edge_index[e] for e in edges]
        return Graph(nodes, es)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nodes, self.edges))
        return self._hash

    def __repr__(self) -> str:
        es = ", ".join(f"{e.id}:{e.src}-{e.label}->{e.tgt}" for e in self.edges)
        return f"Graph(nodes={list(self.nodes)}, edges=[{es}])"


def validate(g: Graph, labels: Optional[Iterable[str]] = None) -> None:
    """Check the graph invariants, raising :class:`GraphError` on the first violation."""
    if len(set(g.nodes)) != len(g.nodes):
        dup = sorted({v for v in g.nodes if g.nodes.count(v) > 1})
        raise GraphError(f"duplicate id: node {dup[0]!r}")
    ids = [e.id for e in g.edges]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise GraphError(f"duplicate id: edge {dup[0]!r}")
    nodes = set(g.nodes)
    allowed = None if labels is None else set(labels)
    for e in g.edges:
        for end in (e.src, e.tgt):
            if end not in nodes:
                raise GraphError(f"dangling endpoint: edge {e.id!r} refers to missing node {end!r}")
        if allowed is not None and e.label not in allowed:
            raise GraphError(f"unknown label: edge {e.id!r} has label {e.label!r}")


class GraphMorphism:
    """A pair of total maps ``V_dom -> V_cod`` and ``E_dom -> E_cod``."""

    __slots__ = ("dom", "cod", "node_map", "edge_map", "_hash", "_mono", "memo")

    def __init__(self, dom: Graph, cod: Graph, node_map: Mapping[str, str],
                 edge_map: Mapping[str, str], check: bool = True):
        self.dom = dom
        self.cod = cod
        self.node_map = dict(node_map)
        self.edge_map = dict(edge_map)
        self._hash: Optional[int] = None
        self._mono: Optional[bool] = None
        self.memo: dict = {}  # derived data cached by clients (e.g. index maps)
        if check:
            self.validate()

    def validate(self) -> None:
        if set(self.node_map) != set(self.dom.nodes):
            raise GraphError("node map is not total on the domain")
        if set(self.edge_map) != set(self.dom.edge_ids):
            raise GraphError("edge map is not total on the domain")
        cod_nodes = set(self.cod.nodes)
        for v, w in self.node_map.items():
            if w not in cod_nodes:
                raise GraphError(f"node {v!r} mapped to missing node {w!r}")
        for e in self.dom.edges:
            tid = self.edge_map[e.id]
            if not self.cod.has_edge(tid):
                raise GraphError(f"edge {e.id!r} mapped to missing edge {tid!r}")
            t = self.cod.edge(tid)
            if t.src != self.node_map[e.src] or t.tgt != self.node_map[e.tgt]:
                raise GraphError(f"edge {e.id!r}: endpoints not preserved")
            if t.label != e.label:
                raise GraphError(f"edge {e.id!r}: label not preserved")

    def __call__(self, item: str) -> str:
        """Image of a node id."""
        return self.node_map[item]

    def edge(self, eid: str) -> str:
        return self.edge_map[eid]

    def node_image(self) -> set[str]:
        return set(self.node_map.values())

    def edge_image(self) -> set[str]:
        return set(self.edge_map.values())

    def key(self) -> tuple:
        return (tuple(sorted(self.node_map.items())), tuple(sorted(self.edge_map.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and self.node_map == other.node_map and self.edge_map == other.edge_map)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, self.key()))
        return self._hash

    def __repr__(self) -> str:
        return f"GraphMorphism(nodes={self.node_map}, edges={self.edge_map})"


def identity(g: Graph) -> GraphMorphism:
    return GraphMorphism(g, g, {v: v for v in g.nodes}, {e.id: e.id for e in g.edges}, check=False)


def inclusion(sub: Graph, g: Graph) -> GraphMorphism:
    return GraphMorphism(sub, g, {v: v for v in sub.nodes}, {e.id: e.id for e in sub.edges})


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """``g . f`` (first ``f``, then ``g``)."""
    if f.cod != g.dom:
        raise GraphError("object mismatch: codomain of f differs from domain of g")
    return GraphMorphism(
        f.dom, g.cod,
        {v: g.node_map[w] for v, w in f.node_map.items()},
        {e: g.edge_map[t] for e, t in f.edge_map.items()},
        check=False,
    )


def _injective(m: Mapping[str, str]) -> bool:
    return len(set(m.values())) == len(m)


def is_mono(f: GraphMorphism) -> bool:
    if f._mono is None:
        f._mono = _injective(f.node_map) and _injective(f.edge_map)
    return f._mono


def is_epi(f: GraphMorphism) -> bool:
    return f.node_image() == set(f.cod.nodes) and f.edge_image() == set(f.cod.edge_ids)


def is_iso(f: GraphMorphism) -> bool:
    return is_mono(f) and is_epi(f)


def inverse(f: GraphMorphism) -> GraphMorphism:
    if not is_iso(f):
        raise GraphError("morphism is not an isomorphism")
    return GraphMorphism(f.cod, f.dom, {w: v for v, w in f.node_map.items()},
                         {t: e for e, t in f.edge_map.items()}, check=False)


def _edge_buckets(h: Graph) -> dict[tuple[str, str, str], list[str]]:
    buckets: dict[tuple[str, str, str], list[str]] = {}
    for e in h.edges:
        buckets.setdefault((e.src, e.tgt, e.label), []).append(e.id)
    return buckets


def enumerate_homs(g: Graph, h: Graph, *, mono: bool = False,
                   node_allowed: Optional[Mapping[str, Iterable[str]]] = None,
                   edge_allowed: Optional[Mapping[str, Iterable[str]]] = None,
                   ) -> Iterator[GraphMorphism]:
    """All morphisms ``g -> h`` in deterministic order.

    Nodes are assigned by backtracking in ascending id order with candidates in
    ascending id order; edges are then assigned the same way.  ``node_allowed``
    and ``edge_allowed`` optionally restrict the candidates of individual items.
    """
    buckets = _edge_buckets(h)
    nodes = g.nodes
    node_cands = []
    for v in nodes:
        if node_allowed is not None and v in node_allowed:
            allowed = set(node_allowed[v])
            node_cands.append([w for w in h.nodes if w in allowed])
        else:
            node_cands.append(list(h.nodes))
    edge_allowed_sets = ({k: set(v) for k, v in edge_allowed.items()}
                         if edge_allowed is not None else {})
    # edges checked as soon as both endpoints are placed
    pos = {v: i for i, v in enumerate(nodes)}
    ready: list[list[Edge]] = [[] for _ in nodes]
    for e in g.edges:
        ready[max(pos[e.src], pos[e.tgt])].append(e)

    def edge_cands(e: Edge, nm: dict[str, str]) -> list[str]:
        cands = buckets.get((nm[e.src], nm[e.tgt], e.label), [])
        if e.id in edge_allowed_sets:
            allowed = edge_allowed_sets[e.id]
            cands = [c for c in cands if c in allowed]
        return cands

    nm: dict[str, str] = {}
    used_nodes: set[str] = set()

    def assign_nodes(i: int) -> Iterator[dict[str, str]]:
        if i == len(nodes):
            yield nm
            return
        v = nodes[i]
        for w in node_cands[i]:
            if mono and w in used_nodes:
                continue
            nm[v] = w
            if all(edge_cands(e, nm) for e in ready[i]):
                used_nodes.add(w)
                yield from assign_nodes(i + 1)
                used_nodes.discard(w)
            del nm[v]

    edges = g.edges

    for node_map in assign_nodes(0):
        cands = [edge_cands(e, node_map) for e in edges]
        em: dict[str, str] = {}
        used_edges: set[str] = set()

        def assign_edges(j: int) -> Iterator[dict[str, str]]:
            if j == len(edges):
                yield em
                return
            for c in cands[j]:
                if mono and c in used_edges:
                    continue
                em[edges[j].id] = c
                used_edges.add(c)
                yield from assign_edges(j + 1)
                used_edges.discard(c)
                del em[edges[j].id]

        for edge_map in assign_edges(0):
            yield GraphMorphism(g, h, dict(node_map), dict(edge_map), check=False)


def enumerate_monos(g: Graph, h: Graph, **kw) -> Iterator[GraphMorphism]:
    return enumerate_homs(g, h, mono=True, **kw)


def first_hom(g: Graph, h: Graph, **kw) -> Optional[GraphMorphism]:
    return next(enumerate_homs(g, h, **kw), None)


def _profile(g: Graph) -> tuple:
    return (len(g.nodes), sorted(e.label for e in g.edges),
            sorted((sum(1 for e in g.edges if e.src == v), sum(1 for e in g.edges if e.tgt == v))
                   for v in g.nodes))


def find_iso(g: Graph, h: Graph) -> Optional[GraphMorphism]:
    """An isomorphism ``g -> h`` if one exists (the first in enumeration order)."""
    if len(g.nodes) != len(h.nodes) or len(g.edges) != len(h.edges):
        return None
    if _profile(g) != _profile(h):
        return None
    return next(enumerate_homs(g, h, mono=True), None)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_iso(g, h) is not None


def image_of(f: GraphMorphism) -> Graph:
    """The image of ``f`` as a subgraph of its codomain."""
    return f.cod.subgraph(f.node_image(), f.edge_image())
