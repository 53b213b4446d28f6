"""Hypothesis strategies for small labelled graphs and morphisms."""

from __future__ import annotations

from hypothesis import strategies as st

from absrewrite.graph import Edge, Graph, enumerate_homs, enumerate_monos


@st.composite
def graphs(draw, max_nodes: int = 3, max_edges: int = 3, labels=("a",), min_nodes: int = 0):
    n = draw(st.integers(min_nodes, max_nodes))
    nodes = [f"n{i}" for i in range(n)]
    if not nodes:
        return Graph()
    k = draw(st.integers(0, max_edges))
    edges = []
    for i in range(k):
        s = draw(st.sampled_from(nodes))
        t = draw(st.sampled_from(nodes))
        lab = draw(st.sampled_from(list(labels)))
        edges.append(Edge(f"e{i}", s, t, lab))
    return Graph(nodes, edges)


@st.composite
def homs(draw, src, dst, mono: bool = False):
    fs = list(enumerate_monos(src, dst) if mono else enumerate_homs(src, dst))
    if not fs:
        return None
    return draw(st.sampled_from(fs))


@st.composite
def subgraph_inclusion(draw, g: Graph):
    """A subgraph of ``g`` given by node and edge choices closed under endpoints."""
    keep = [v for v in g.nodes if draw(st.booleans())]
    ks = set(keep)
    es = [e.id for e in g.edges if e.src in ks and e.tgt in ks and draw(st.booleans())]
    return g.subgraph(keep, es)
