"""Pushouts, pullbacks, products and pushout complements of graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import (Edge, Graph, GraphError, GraphMorphism, compose, inclusion, is_iso,
                    is_mono)


@dataclass(frozen=True)
class CospanResult:
    """Apex of a (co)limit with its two legs.

    For a pushout the legs go *into* the apex, for a pullback they leave it.
    """
    apex: Graph
    left: GraphMorphism
    right: GraphMorphism


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the lexicographically least tag as the root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def pushout(f: GraphMorphism, g: GraphMorphism) -> CospanResult:
    """Pushout of the span ``B <-f- I -g-> C``.

    Items of ``B`` and ``C`` are tagged ``l:`` and ``r:``; each item of the
    apex is named by the least tag in its equivalence class.
    """
    if f.dom != g.dom:
        raise GraphError("pushout needs a span with a common domain")
    b, c = f.cod, g.cod
    nodes_uf = _UnionFind([f"l:{v}" for v in b.nodes] + [f"r:{v}" for v in c.nodes])
    edges_uf = _UnionFind([f"l:{e}" for e in b.edge_ids] + [f"r:{e}" for e in c.edge_ids])
    for v in f.dom.nodes:
        nodes_uf.union(f"l:{f.node_map[v]}", f"r:{g.node_map[v]}")
    for e in f.dom.edge_ids:
        edges_uf.union(f"l:{f.edge_map[e]}", f"r:{g.edge_map[e]}")
    # the root kept by union is not necessarily the minimum of a merged class
    node_rep = _least_reps(nodes_uf)
    edge_rep = _least_reps(edges_uf)
    edges = {}
    for tag, src_graph in (("l", b), ("r", c)):
        for e in src_graph.edges:
            rid = edge_rep[f"{tag}:{e.id}"]
            if rid not in edges:
                edges[rid] = Edge(rid, node_rep[f"{tag}:{e.src}"], node_rep[f"{tag}:{e.tgt}"], e.label)
    d = Graph(set(node_rep.values()), edges.values())
    left = GraphMorphism(b, d, {v: node_rep[f"l:{v}"] for v in b.nodes},
                         {e: edge_rep[f"l:{e}"] for e in b.edge_ids}, check=False)
    right = GraphMorphism(c, d, {v: node_rep[f"r:{v}"] for v in c.nodes},
                          {e: edge_rep[f"r:{e}"] for e in c.edge_ids}, check=False)
    return CospanResult(d, left, right)


def _least_reps(uf: _UnionFind) -> dict[str, str]:
    classes: dict[str, list[str]] = {}
    for x in uf.parent:
        classes.setdefault(uf.find(x), []).append(x)
    rep = {}
    for members in classes.values():
        least = min(members)
        for m in members:
            rep[m] = least
    return rep


def pullback(f: GraphMorphism, g: GraphMorphism) -> CospanResult:
    """Pullback of the cospan ``B -f-> D <-g- C``; items are pairs ``(b,c)``."""
    if f.cod != g.cod:
        raise GraphError("pullback needs a cospan with a common codomain")
    b, c = f.dom, g.dom
    nodes = [(x, y) for x in b.nodes for y in c.nodes if f.node_map[x] == g.node_map[y]]
    name = {p: f"({p[0]},{p[1]})" for p in nodes}
    edges = []
    eproj = []
    for e1 in b.edges:
        for e2 in c.edges:
            if f.edge_map[e1.id] == g.edge_map[e2.id]:
                eid = f"({e1.id},{e2.id})"
                edges.append(Edge(eid, name[(e1.src, e2.src)], name[(e1.tgt, e2.tgt)], e1.label))
                eproj.append((eid, e1.id, e2.id))
    a = Graph(name.values(), edges)
    left = GraphMorphism(a, b, {name[p]: p[0] for p in nodes}, {x: y for x, y, _ in eproj},
                         check=False)
    right = GraphMorphism(a, c, {name[p]: p[1] for p in nodes}, {x: z for x, _, z in eproj},
                          check=False)
    return CospanResult(a, left, right)


def to_terminal(g: Graph, one: Graph) -> GraphMorphism:
    """The unique morphism into the terminal graph ``one``."""
    loops = {e.label: e.id for e in one.edges}
    (pt,) = one.nodes
    return GraphMorphism(g, one, {v: pt for v in g.nodes},
                         {e.id: loops[e.label] for e in g.edges}, check=False)


def product(b: Graph, c: Graph, one: Graph) -> CospanResult:
    """Binary product, computed as the pullback over the terminal graph ``one``."""
    return pullback(to_terminal(b, one), to_terminal(c, one))


def pair(x: GraphMorphism, y: GraphMorphism, pb: CospanResult) -> GraphMorphism:
    """The mediating morphism ``<x, y>`` into a pullback computed by :func:`pullback`."""
    if x.dom != y.dom:
        raise GraphError("pairing needs a common domain")
    nm = {v: f"({x.node_map[v]},{y.node_map[v]})" for v in x.dom.nodes}
    em = {e: f"({x.edge_map[e]},{y.edge_map[e]})" for e in x.dom.edge_ids}
    return GraphMorphism(x.dom, pb.apex, nm, em)


# -- pushout complements ---------------------------------------------------

def _require_monos(*ms: GraphMorphism) -> None:
    for m in ms:
        if not is_mono(m):
            raise GraphError("non-mono input: pushout complements are only computed along monos")


def _deleted(phi_l: GraphMorphism, m: GraphMorphism) -> tuple[set[str], set[str]]:
    kept_nodes = set(phi_l.node_map.values())
    kept_edges = set(phi_l.edge_map.values())
    dn = {m.node_map[v] for v in phi_l.cod.nodes if v not in kept_nodes}
    de = {m.edge_map[e] for e in phi_l.cod.edge_ids if e not in kept_edges}
    return dn, de


def gluing_ok(phi_l: GraphMorphism, m: GraphMorphism) -> bool:
    """Dangling condition for ``I -phi_l-> L -m-> X``, both monos."""
    _require_monos(phi_l, m)
    if phi_l.cod != m.dom:
        raise GraphError("object mismatch: phi_l and m are not composable")
    dn, de = _deleted(phi_l, m)
    for e in m.cod.edges:
        if e.id not in de and (e.src in dn or e.tgt in dn):
            return False
    return True


def pushout_complement(phi_l: GraphMorphism, m: GraphMorphism
                       ) -> Optional[tuple[Graph, GraphMorphism, GraphMorphism]]:
    """``(C, I -> C, C >-> X)`` or ``None`` when the gluing condition fails."""
    if not gluing_ok(phi_l, m):
        return None
    x = m.cod
    dn, de = _deleted(phi_l, m)
    c = x.subgraph([v for v in x.nodes if v not in dn], [e for e in x.edge_ids if e not in de])
    incl = inclusion(c, x)
    mi = compose(phi_l, m)
    to_c = GraphMorphism(phi_l.dom, c, mi.node_map, mi.edge_map)
    return c, to_c, incl


# -- square recognisers ----------------------------------------------------

def _check_square(f, g, h, k) -> None:
    if f.dom != g.dom or h.dom != f.cod or k.dom != g.cod or h.cod != k.cod:
        raise GraphError("arrows do not form a square")
    if compose(f, h) != compose(g, k):
        raise GraphError("non-commuting square")


def is_pushout_square(f: GraphMorphism, g: GraphMorphism, h: GraphMorphism,
                      k: GraphMorphism) -> bool:
    """Is ``A -f-> B -h-> D  =  A -g-> C -k-> D`` a pushout?"""
    _check_square(f, g, h, k)
    po = pushout(f, g)
    nm: dict[str, str] = {}
    em: dict[str, str] = {}
    for leg, out in ((po.left, h), (po.right, k)):
        for v, w in leg.node_map.items():
            nm[w] = out.node_map[v]
        for e, t in leg.edge_map.items():
            em[t] = out.edge_map[e]
    u = GraphMorphism(po.apex, h.cod, nm, em, check=False)
    return is_iso(u)


def is_pullback_square(f: GraphMorphism, g: GraphMorphism, h: GraphMorphism,
                       k: GraphMorphism) -> bool:
    """Is ``A`` (with projections ``f``, ``g``) a pullback of ``B -h-> D <-k- C``?"""
    _check_square(f, g, h, k)
    pb = pullback(h, k)
    u = pair(f, g, pb)
    return is_iso(u)
