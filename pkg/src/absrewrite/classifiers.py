"""Subobject classifier, partial map classifier and final pullback complements."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .enumeration import enumerate_over, terminal
from .graph import (Edge, Graph, GraphError, GraphMorphism, compose, enumerate_homs,
                    inclusion, is_mono)
from .limits import is_pullback_square, pullback

IN, OUT = "in", "out"
BOT = "bot"

# edge classes of Omega, by which of (edge, src, tgt) lie in the subobject
EDGE_CLASSES = ("all", "nodes", "src", "tgt", "none")
_ENDS = {"all": (IN, IN), "nodes": (IN, IN), "src": (IN, OUT), "tgt": (OUT, IN), "none": (OUT, OUT)}


@dataclass(frozen=True)
class OmegaGraph:
    graph: Graph
    true: GraphMorphism
    labels: tuple[str, ...]


def omega(labels: Iterable[str]) -> OmegaGraph:
    labs = tuple(sorted(set(labels)))
    if not labs:
        raise GraphError("the label alphabet must be non-empty")
    edges = [Edge(f"{cls}:{lab}", *_ENDS[cls], lab) for lab in labs for cls in EDGE_CLASSES]
    g = Graph([IN, OUT], edges)
    one = terminal(labs)
    true = GraphMorphism(one, g, {"1": IN}, {e.id: f"all:{e.label}" for e in one.edges})
    return OmegaGraph(g, true, labs)


def characteristic(m: GraphMorphism, om: OmegaGraph) -> GraphMorphism:
    """The characteristic morphism ``X -> Omega`` of the subobject ``m: L >-> X``."""
    if not is_mono(m):
        raise GraphError("non-mono input: characteristic maps classify monos only")
    x = m.cod
    vin = m.node_image()
    ein = m.edge_image()
    nm = {v: IN if v in vin else OUT for v in x.nodes}
    em = {}
    for e in x.edges:
        if e.id in ein:
            cls = "all"
        elif e.src in vin and e.tgt in vin:
            cls = "nodes"
        elif e.src in vin:
            cls = "src"
        elif e.tgt in vin:
            cls = "tgt"
        else:
            cls = "none"
        em[e.id] = f"{cls}:{e.label}"
    return GraphMorphism(x, om.graph, nm, em)


# -- partial map classifier ------------------------------------------------

@dataclass(frozen=True)
class PartialMapClassifier:
    base: Graph
    graph: Graph
    eta: GraphMorphism
    labels: tuple[str, ...]


def pair_edge_id(u: str, v: str, label: str) -> str:
    return f"pair:{u},{v},{label}"


def pmc(g: Graph, labels: Iterable[str]) -> PartialMapClassifier:
    """``T(G)``: ``G`` plus a fresh node ``bot`` and, per label, one extra edge
    between every ordered pair of nodes of ``V_G + {bot}``."""
    labs = tuple(sorted(set(labels) | g.labels))
    if g.has_node(BOT):
        raise GraphError(f"node id {BOT!r} is reserved for the partial map classifier")
    pts = list(g.nodes) + [BOT]
    edges = list(g.edges)
    for lab in labs:
        for u in pts:
            for v in pts:
                edges.append(Edge(pair_edge_id(u, v, lab), u, v, lab))
    t = Graph(pts, edges)
    return PartialMapClassifier(g, t, inclusion(g, t), labs)


def classify_partial(d: GraphMorphism, f: GraphMorphism, t: PartialMapClassifier) -> GraphMorphism:
    """The total map ``X -> T(G)`` classifying the partial map ``X <-d-< D -f-> G``."""
    if not is_mono(d):
        raise GraphError("non-mono input: the domain of definition must be a subobject")
    x = d.cod
    back_n = {w: v for v, w in d.node_map.items()}
    back_e = {w: e for e, w in d.edge_map.items()}
    nm = {v: f.node_map[back_n[v]] if v in back_n else BOT for v in x.nodes}
    em = {}
    for e in x.edges:
        if e.id in back_e:
            em[e.id] = f.edge_map[back_e[e.id]]
        else:
            em[e.id] = pair_edge_id(nm[e.src], nm[e.tgt], e.label)
    return GraphMorphism(x, t.graph, nm, em)


def classifying_maps(d: GraphMorphism, f: GraphMorphism, t: PartialMapClassifier
                     ) -> list[GraphMorphism]:
    """All ``chi: X -> T(G)`` whose pullback along ``eta_G`` is ``(d, f)`` (by search)."""
    eta = t.eta
    out = []
    img_n, img_e = d.node_image(), d.edge_image()
    g_nodes, g_edges = set(t.base.nodes), set(t.base.edge_ids)
    for chi in enumerate_homs(d.cod, t.graph):
        if compose(d, chi) != compose(f, eta):
            continue
        # pullback: exactly the items of D land in the image of eta
        if all((chi.node_map[v] in g_nodes) == (v in img_n) for v in d.cod.nodes) and \
                all((chi.edge_map[e] in g_edges) == (e in img_e) for e in d.cod.edge_ids):
            out.append(chi)
    return out


# -- final pullback complements --------------------------------------------

def fpbc_mono(alpha: GraphMorphism, m: GraphMorphism) -> tuple[GraphMorphism, GraphMorphism]:
    """FPBC ``I -gamma-> F -beta-> G`` of ``I -alpha-> L -m-> G`` for monos.

    ``F`` is ``G`` without ``m(L - alpha(I))`` and without every edge incident
    to a removed node.
    """
    if not (is_mono(alpha) and is_mono(m)):
        raise GraphError("non-mono input: fpbc_mono needs two monos")
    if alpha.cod != m.dom:
        raise GraphError("object mismatch: alpha and m are not composable")
    g = m.cod
    kept_n = set(alpha.node_map.values())
    kept_e = set(alpha.edge_map.values())
    dn = {m.node_map[v] for v in alpha.cod.nodes if v not in kept_n}
    de = {m.edge_map[e] for e in alpha.cod.edge_ids if e not in kept_e}
    f = g.subgraph([v for v in g.nodes if v not in dn],
                   [e.id for e in g.edges if e.id not in de and e.src not in dn and e.tgt not in dn])
    beta = inclusion(f, g)
    am = compose(alpha, m)
    gamma = GraphMorphism(alpha.dom, f, am.node_map, am.edge_map)
    return gamma, beta


def fpbc_violation(alpha: GraphMorphism, m: GraphMorphism, gamma: GraphMorphism,
                   beta: GraphMorphism, bound: int) -> Optional[dict]:
    """First witness that ``(gamma, beta)`` is not an FPBC of ``(alpha, m)``, or ``None``.

    Competing complements ``F' -> G`` are enumerated up to ``bound`` nodes and
    ``bound`` edges; each is completed to a pullback along ``m``.
    """
    if not is_pullback_square(gamma, alpha, beta, m):
        return {"reason": "square is not a pullback"}
    g = m.cod
    f_graph = beta.dom
    for f2, beta2 in enumerate_over(g, bound, bound):
        pb = pullback(m, beta2)
        alpha2, gamma2 = pb.left, pb.right
        i2 = pb.apex
        # f: I' -> I with alpha . f = alpha'
        allowed_n = {v: [w for w in alpha.dom.nodes if alpha.node_map[w] == alpha2.node_map[v]]
                     for v in i2.nodes}
        allowed_e = {e: [t for t in alpha.dom.edge_ids if alpha.edge_map[t] == alpha2.edge_map[e]]
                     for e in i2.edge_ids}
        for fmap in enumerate_homs(i2, alpha.dom, node_allowed=allowed_n, edge_allowed=allowed_e):
            gf = compose(fmap, gamma)
            # f': F' -> F with beta . f' = beta' and f' . gamma' = gamma . f
            an = {v: [w for w in f_graph.nodes if beta.node_map[w] == beta2.node_map[v]]
                  for v in f2.nodes}
            ae = {e: [t for t in f_graph.edge_ids if beta.edge_map[t] == beta2.edge_map[e]]
                  for e in f2.edge_ids}
            for v in i2.nodes:
                an[gamma2.node_map[v]] = [w for w in an[gamma2.node_map[v]] if w == gf.node_map[v]]
            for e in i2.edge_ids:
                ae[gamma2.edge_map[e]] = [t for t in ae[gamma2.edge_map[e]] if t == gf.edge_map[e]]
            count = 0
            for _ in enumerate_homs(f2, f_graph, node_allowed=an, edge_allowed=ae):
                count += 1
                if count > 1:
                    break
            if count != 1:
                return {"reason": "mediating arrow " + ("missing" if count == 0 else "not unique"),
                        "competitor": f2, "competitor_map": beta2, "f": fmap}
    return None


def is_fpbc(alpha: GraphMorphism, m: GraphMorphism, gamma: GraphMorphism,
            beta: GraphMorphism, bound: int = 4) -> bool:
    return fpbc_violation(alpha, m, gamma, beta, bound) is None
