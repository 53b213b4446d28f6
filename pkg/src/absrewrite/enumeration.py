"""Bounded graph enumeration and canonical forms.

Everything here is brute force on purpose: it is the ground truth the
constructive modules are checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional

from .graph import Edge, Graph, GraphMorphism


@dataclass(frozen=True)
class EnumerationBudget:
    max_nodes: int
    max_edges: int
    labels: tuple[str, ...] = ("a",)

    def __post_init__(self):
        if self.max_nodes < 0 or self.max_edges < 0:
            raise ValueError("budgets must be non-negative")
        if not self.labels:
            raise ValueError("label alphabet must be non-empty")


def terminal(labels: Iterable[str]) -> Graph:
    """The terminal graph: one node ``"1"`` carrying one loop per label."""
    return Graph(["1"], [Edge(f"1:{lab}", "1", "1", lab) for lab in sorted(set(labels))])


# -- canonical forms -------------------------------------------------------

def canonical_form(g: Graph, node_color: Optional[Mapping[str, Hashable]] = None,
                   edge_color: Optional[Mapping[str, Hashable]] = None) -> tuple:
    """Lexicographically least adjacency encoding over all admissible node orderings.

    Two graphs (with optional node/edge colourings) get the same form iff they
    are isomorphic by a colour-preserving isomorphism.  Nodes are first split
    into classes by an isomorphism invariant; only orderings compatible with
    the class order are tried.
    """
    ncol = node_color or {}
    ecol = edge_color or {}

    def nc(v):
        return repr(ncol.get(v, ""))

    def ec(e):
        return repr(ecol.get(e, ""))

    inv: dict[str, list] = {v: [nc(v), [], []] for v in g.nodes}
    for e in g.edges:
        tag = (e.label, ec(e.id), e.src == e.tgt)
        inv[e.src][1].append(tag)
        inv[e.tgt][2].append(tag)
    key = {v: (i[0], tuple(sorted(i[1])), tuple(sorted(i[2]))) for v, i in inv.items()}
    classes: dict[tuple, list[str]] = {}
    for v in g.nodes:
        classes.setdefault(key[v], []).append(v)
    ordered = [classes[k] for k in sorted(classes)]
    colors = tuple(k[0] for k in sorted(classes) for _ in classes[k])
    best = None
    for perm_parts in itertools.product(*(itertools.permutations(c) for c in ordered)):
        pos = {}
        i = 0
        for part in perm_parts:
            for v in part:
                pos[v] = i
                i += 1
        enc = tuple(sorted((pos[e.src], pos[e.tgt], e.label, ec(e.id)) for e in g.edges))
        if best is None or enc < best:
            best = enc
    return (len(g.nodes), colors, best or ())


def mono_key(m: GraphMorphism) -> tuple:
    """Canonical form of the codomain with the image of ``m`` marked item by item."""
    ncol = {w: v for v, w in m.node_map.items()}
    ecol = {t: e for e, t in m.edge_map.items()}
    return canonical_form(m.cod, ncol, ecol)


# -- enumeration -----------------------------------------------------------

def _node_counts(types: tuple[str, ...], max_nodes: int, lo: Mapping[str, int],
                 hi: Mapping[str, int]) -> Iterator[tuple[int, ...]]:
    def rec(i: int, left: int) -> Iterator[tuple[int, ...]]:
        if i == len(types):
            yield ()
            return
        t = types[i]
        for k in range(lo.get(t, 0), min(hi.get(t, max_nodes), left) + 1):
            for rest in rec(i + 1, left - k):
                yield (k,) + rest
    return rec(0, max_nodes)


def enumerate_over(shape: Graph, max_nodes: int, max_edges: int, *,
                   node_caps: Optional[Mapping[str, int]] = None,
                   edge_caps: Optional[Mapping[str, int]] = None,
                   node_mins: Optional[Mapping[str, int]] = None,
                   edge_mins: Optional[Mapping[str, int]] = None,
                   reduce: bool = True) -> Iterator[tuple[Graph, GraphMorphism]]:
    """Graphs ``X`` with a morphism ``X -> shape``, within the budget.

    Every pair ``(X, xi)`` is produced up to isomorphism over ``shape`` at
    least once (usually once; ``reduce`` prunes most relabelled duplicates by
    demanding that nodes of a common type are sorted by a local invariant).
    Caps and mins bound the number of preimages of individual shape items.
    """
    hi_n = dict(node_caps or {})
    lo_n = dict(node_mins or {})
    hi_e = dict(edge_caps or {})
    lo_e = dict(edge_mins or {})
    types = shape.nodes
    tedges = shape.edges
    for counts in _node_counts(types, max_nodes, lo_n, hi_n):
        nodes: list[str] = []
        typ: dict[str, str] = {}
        by_type: dict[str, list[str]] = {}
        for t, k in zip(types, counts):
            for _ in range(k):
                v = f"v{len(nodes)}"
                nodes.append(v)
                typ[v] = t
                by_type.setdefault(t, []).append(v)
        slots_per = [[(u, w) for u in by_type.get(te.src, []) for w in by_type.get(te.tgt, [])]
                     for te in tedges]

        def rec(i: int, left: int) -> Iterator[list[tuple[int, tuple[str, str]]]]:
            if i == len(tedges):
                yield []
                return
            te = tedges[i]
            slots = slots_per[i]
            lo = lo_e.get(te.id, 0)
            top = min(hi_e.get(te.id, max_edges), left)
            if not slots:
                if lo > 0:
                    return
                top = 0
            for k in range(lo, top + 1):
                for combo in itertools.combinations_with_replacement(range(len(slots)), k):
                    chosen = [(i, slots[c]) for c in combo]
                    for rest in rec(i + 1, left - k):
                        yield chosen + rest

        for chosen in rec(0, max_edges):
            if reduce and not _sorted_within_types(nodes, typ, chosen, tedges):
                continue
            edges = []
            emap = {}
            for j, (ti, (u, w)) in enumerate(chosen):
                eid = f"e{j}"
                edges.append(Edge(eid, u, w, tedges[ti].label))
                emap[eid] = tedges[ti].id
            x = Graph(nodes, edges)
            yield x, GraphMorphism(x, shape, dict(typ), emap, check=False)


def _sorted_within_types(nodes, typ, chosen, tedges) -> bool:
    sig: dict[str, list] = {v: [] for v in nodes}
    for ti, (u, w) in chosen:
        if u == w:
            sig[u].append((ti, 2))
        else:
            sig[u].append((ti, 0))
            sig[w].append((ti, 1))
    prev: dict[str, tuple] = {}
    for v in nodes:
        s = tuple(sorted(sig[v]))
        t = typ[v]
        if t in prev and prev[t] < s:
            return False
        prev[t] = s
    return True


def enumerate_graphs(budget: EnumerationBudget) -> list[Graph]:
    """All graphs within the budget, one per isomorphism class, in canonical order."""
    seen: dict[tuple, Graph] = {}
    for x, _ in enumerate_over(terminal(budget.labels), budget.max_nodes, budget.max_edges):
        k = canonical_form(x)
        if k not in seen:
            seen[k] = x
    return [seen[k] for k in sorted(seen)]


def graphs_over(shape: Graph, max_nodes: int, max_edges: int, **caps) -> list[Graph]:
    """Isomorphism-class representatives of graphs admitting a morphism into ``shape``."""
    seen: dict[tuple, Graph] = {}
    for x, _ in enumerate_over(shape, max_nodes, max_edges, **caps):
        k = canonical_form(x)
        if k not in seen:
            seen[k] = x
    return [seen[k] for k in sorted(seen)]


def subgraphs(g: Graph) -> Iterator[Graph]:
    """All subgraphs of ``g`` (node subset plus any edge subset closed under endpoints)."""
    for r in range(len(g.nodes) + 1):
        for ns in itertools.combinations(g.nodes, r):
            nset = set(ns)
            avail = [e.id for e in g.edges if e.src in nset and e.tgt in nset]
            for k in range(len(avail) + 1):
                for es in itertools.combinations(avail, k):
                    yield g.subgraph(ns, es)
