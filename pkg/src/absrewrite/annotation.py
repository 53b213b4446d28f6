"""Ordered monoids with subtraction and annotation functors on graphs.

Three functors are provided:

* ``mult_functor(n)``: multiplicities, every node and edge carries a value of
  the counting monoid ``M_n``; morphisms sum over preimages.
* ``outdeg_functor(n)``: every node carries a value of ``M_n``; morphisms take
  the supremum over preimages; the standard annotation is the out-degree.
* ``path_functor()``: sets of node pairs inside the transitive closure of the
  edge relation; morphisms take images.

:func:`check_property` tests the annotation properties needed for soundness
and completeness of abstract rewriting on exhaustively generated graphs.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Optional

from .enumeration import EnumerationBudget, canonical_form, enumerate_graphs, subgraphs
from .graph import (Graph, GraphError, GraphMorphism, compose, enumerate_homs, identity, inclusion,
                    is_iso, is_mono)

STAR = math.inf  # "many" in M_n; compares above every number


class CapabilityAbsent(Exception):
    """The functor does not provide an operation a computation needs."""


def format_value(v) -> Any:
    return "*" if v == STAR else int(v)


def parse_value(v, n: int):
    if v == "*" or v == STAR:
        return STAR
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"annotation value must be an integer or '*', got {v!r}")
    if v < 0 or v > n:
        raise ValueError(f"annotation value {v} outside 0..{n}")
    return v


# -- monoids -----------------------------------------------------------------

class OrderedMonoid:
    """Capability contract: ``zero``, ``plus``, ``minus``, ``leq`` and a finite carrier."""

    zero: Hashable
    well_behaved: bool = False

    def plus(self, a, b):
        raise NotImplementedError

    def minus(self, a, b):
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise NotImplementedError

    def size(self) -> int:
        raise NotImplementedError

    def random_element(self, rng: random.Random):
        raise NotImplementedError


@dataclass(frozen=True)
class CountingMonoid(OrderedMonoid):
    """``M_n = {0, 1, ..., n, *}`` with saturating addition and truncated subtraction."""
    n: int
    well_behaved = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("the counting monoid needs n >= 1")

    @property
    def zero(self):
        return 0

    @property
    def top(self):
        return STAR

    def plus(self, a, b):
        s = a + b
        return STAR if s > self.n else s

    def minus(self, a, b):
        if a == STAR:
            # many minus many is left open by the definition; 0 keeps a - a = 0
            return 0 if b == STAR else STAR
        return a - b if a > b else 0

    def leq(self, a, b) -> bool:
        return a <= b

    def elements(self) -> Iterator:
        yield from range(self.n + 1)
        yield STAR

    def size(self) -> int:
        return self.n + 2

    def random_element(self, rng: random.Random):
        return rng.choice(list(self.elements()))

    def cap(self, k: int):
        return STAR if k > self.n else k


@dataclass(frozen=True)
class ItemMap:
    """A value per node and per edge (edge part empty for node-only annotations)."""
    node_ids: tuple[str, ...]
    node_vals: tuple
    edge_ids: tuple[str, ...] = ()
    edge_vals: tuple = ()
    _lookup: dict = field(default=None, compare=False, hash=False, repr=False)

    @classmethod
    def of(cls, nodes: dict, edges: Optional[dict] = None) -> "ItemMap":
        ns = sorted(nodes)
        es = sorted(edges or {})
        return cls(tuple(ns), tuple(nodes[v] for v in ns),
                   tuple(es), tuple((edges or {})[e] for e in es))

    def _maps(self):
        if self._lookup is None:
            object.__setattr__(self, "_lookup", (dict(zip(self.node_ids, self.node_vals)),
                                                 dict(zip(self.edge_ids, self.edge_vals))))
        return self._lookup

    def node(self, v: str):
        return self._maps()[0][v]

    def edge(self, e: str):
        return self._maps()[1][e]

    @property
    def nodes(self) -> dict:
        return dict(self._maps()[0])

    @property
    def edges(self) -> dict:
        return dict(self._maps()[1])

    def __repr__(self) -> str:
        parts = [f"{k}={format_value(v)}" for k, v in zip(self.node_ids, self.node_vals)]
        parts += [f"{k}={format_value(v)}" for k, v in zip(self.edge_ids, self.edge_vals)]
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class PointwiseMonoid(OrderedMonoid):
    """``base^(V + E)`` (or ``base^V``) with pointwise operations."""
    base: CountingMonoid
    node_ids: tuple[str, ...]
    edge_ids: tuple[str, ...] = ()

    @property
    def well_behaved(self) -> bool:  # type: ignore[override]
        return self.base.well_behaved

    def _check(self, *xs: ItemMap) -> None:
        for x in xs:
            if x.node_ids != self.node_ids or x.edge_ids != self.edge_ids:
                raise GraphError("host mismatch: annotation belongs to a different graph")

    def const(self, v) -> ItemMap:
        return ItemMap(self.node_ids, (v,) * len(self.node_ids),
                       self.edge_ids, (v,) * len(self.edge_ids))

    @property
    def zero(self) -> ItemMap:
        return self.const(0)

    @property
    def top(self) -> ItemMap:
        return self.const(STAR)

    def _zip(self, op, a: ItemMap, b: ItemMap) -> ItemMap:
        self._check(a, b)
        return ItemMap(self.node_ids, tuple(op(x, y) for x, y in zip(a.node_vals, b.node_vals)),
                       self.edge_ids, tuple(op(x, y) for x, y in zip(a.edge_vals, b.edge_vals)))

    def plus(self, a, b):
        return self._zip(self.base.plus, a, b)

    def minus(self, a, b):
        return self._zip(self.base.minus, a, b)

    def leq(self, a, b) -> bool:
        self._check(a, b)
        return (all(x <= y for x, y in zip(a.node_vals, b.node_vals))
                and all(x <= y for x, y in zip(a.edge_vals, b.edge_vals)))

    def size(self) -> int:
        return self.base.size() ** (len(self.node_ids) + len(self.edge_ids))

    def elements(self) -> Iterator[ItemMap]:
        k = len(self.node_ids)
        vals = list(self.base.elements())
        for combo in itertools.product(vals, repeat=k + len(self.edge_ids)):
            yield ItemMap(self.node_ids, combo[:k], self.edge_ids, combo[k:])

    def random_element(self, rng: random.Random) -> ItemMap:
        vals = list(self.base.elements())
        return ItemMap(self.node_ids, tuple(rng.choice(vals) for _ in self.node_ids),
                       self.edge_ids, tuple(rng.choice(vals) for _ in self.edge_ids))


# -- path monoid ---------------------------------------------------------------

@functools.lru_cache(maxsize=4096)
def transitive_closure(g: Graph) -> frozenset[tuple[str, str]]:
    """``E_G^+``: pairs connected by a non-empty path."""
    succ: dict[str, set[str]] = {v: set() for v in g.nodes}
    for e in g.edges:
        succ[e.src].add(e.tgt)
    out = set()
    for v in g.nodes:
        stack = list(succ[v])
        seen: set[str] = set()
        while stack:
            w = stack.pop()
            if w in seen:
                continue
            seen.add(w)
            stack.extend(succ[w])
        out.update((v, w) for w in seen)
    return frozenset(out)


@dataclass(frozen=True)
class PathSet:
    host: Graph
    pairs: frozenset

    def __post_init__(self):
        closure = transitive_closure(self.host)
        if not self.pairs <= closure:
            bad = sorted(self.pairs - closure)[0]
            raise GraphError(f"pair {bad} is not in the transitive closure of the host")

    def __repr__(self) -> str:
        return "{" + ", ".join(f"({a},{b})" for a, b in sorted(self.pairs)) + "}"


def path_plus(p0: PathSet, p1: PathSet) -> PathSet:
    """Pairs joined by chains of fragments taken alternately from ``p0`` and ``p1``."""
    if p0.host != p1.host:
        raise GraphError("host mismatch: path sets live on different graphs")
    frag = (p0.pairs, p1.pairs)
    succ = [{}, {}]
    for j in (0, 1):
        for a, b in frag[j]:
            succ[j].setdefault(a, set()).add(b)
    out = set()
    for start in p0.host.nodes:
        # state (v, j): reached v, the last fragment came from set j
        todo = [(b, j) for j in (0, 1) for b in succ[j].get(start, ())]
        seen = set()
        while todo:
            state = todo.pop()
            if state in seen:
                continue
            seen.add(state)
            v, j = state
            out.add((start, v))
            todo.extend((w, 1 - j) for w in succ[1 - j].get(v, ()))
    return PathSet(p0.host, frozenset(out))


@dataclass(frozen=True)
class PathMonoid(OrderedMonoid):
    """Subsets of ``E_G^+`` ordered by inclusion; subtraction returns its first argument."""
    host: Graph
    well_behaved = False

    @property
    def closure(self) -> frozenset:
        return transitive_closure(self.host)

    @property
    def zero(self) -> PathSet:
        return PathSet(self.host, frozenset())

    @property
    def top(self) -> PathSet:
        return PathSet(self.host, self.closure)

    def _check(self, *xs: PathSet) -> None:
        for x in xs:
            if x.host != self.host:
                raise GraphError("host mismatch: path set belongs to a different graph")

    def plus(self, a, b):
        self._check(a, b)
        return path_plus(a, b)

    def minus(self, a, b):
        self._check(a, b)
        return a

    def leq(self, a, b) -> bool:
        self._check(a, b)
        return a.pairs <= b.pairs

    def size(self) -> int:
        return 2 ** len(self.closure)

    def elements(self) -> Iterator[PathSet]:
        pts = sorted(self.closure)
        for r in range(len(pts) + 1):
            for combo in itertools.combinations(pts, r):
                yield PathSet(self.host, frozenset(combo))

    def random_element(self, rng: random.Random) -> PathSet:
        return PathSet(self.host, frozenset(p for p in sorted(self.closure) if rng.random() < 0.5))


# -- functors ------------------------------------------------------------------

class AnnotationFunctor:
    """Capability contract for an annotation functor ``A: GR -> Mon``.

    ``apply(phi, a)`` is the action ``A_phi``; ``standard(g)`` the standard
    annotation ``s_g``; ``red(phi, b)`` the right adjoint along monos, when
    the functor has one (``has_red``).
    """

    name: str = "?"
    has_red: bool = False

    def monoid(self, g: Graph) -> OrderedMonoid:
        raise NotImplementedError

    def apply(self, phi: GraphMorphism, a):
        raise NotImplementedError

    def standard(self, g: Graph):
        raise NotImplementedError

    def red(self, phi: GraphMorphism, b):
        raise CapabilityAbsent(f"capability absent: {self.name} has no reduction along monos")

    def zero(self, g: Graph):
        return self.monoid(g).zero

    def top(self, g: Graph):
        return self.monoid(g).top

    def plus(self, g: Graph, a, b):
        return self.monoid(g).plus(a, b)

    def minus(self, g: Graph, a, b):
        return self.monoid(g).minus(a, b)

    def leq(self, g: Graph, a, b) -> bool:
        return self.monoid(g).leq(a, b)

    # serialization
    def to_json(self, g: Graph, a) -> dict:
        raise NotImplementedError

    def from_json(self, g: Graph, data: Optional[dict], default) -> Any:
        raise NotImplementedError


class _CountingFunctor(AnnotationFunctor):
    n: int
    with_edges: bool

    def monoid(self, g: Graph) -> PointwiseMonoid:
        return PointwiseMonoid(CountingMonoid(self.n), g.nodes, g.edge_ids if self.with_edges else ())

    def _require_host(self, g: Graph, a: ItemMap) -> None:
        if a.node_ids is g.nodes and (a.edge_ids is g.edge_ids or not self.with_edges):
            return
        if a.node_ids != g.nodes or a.edge_ids != (g.edge_ids if self.with_edges else ()):
            raise GraphError("host mismatch: annotation belongs to a different graph")

    def const(self, g: Graph, v) -> ItemMap:
        return self.monoid(g).const(v)

    def to_json(self, g: Graph, a: ItemMap) -> dict:
        out = {"nodes": {k: format_value(v) for k, v in zip(a.node_ids, a.node_vals)}}
        if self.with_edges:
            out["edges"] = {k: format_value(v) for k, v in zip(a.edge_ids, a.edge_vals)}
        return out

    def from_json(self, g: Graph, data: Optional[dict], default) -> ItemMap:
        data = data or {}
        unknown = set(data) - {"nodes", "edges"}
        if unknown:
            raise ValueError(f"unknown annotation section {sorted(unknown)[0]!r}")
        ns = data.get("nodes", {})
        es = data.get("edges", {})
        for v in ns:
            if not g.has_node(v):
                raise ValueError(f"annotation refers to unknown node {v!r}")
        for e in es:
            if not g.has_edge(e) or not self.with_edges:
                raise ValueError(f"annotation refers to unknown edge {e!r}")
        return ItemMap(g.nodes, tuple(parse_value(ns[v], self.n) if v in ns else default
                                      for v in g.nodes),
                       g.edge_ids if self.with_edges else (),
                       tuple(parse_value(es[e], self.n) if e in es else default for e in g.edge_ids)
                       if self.with_edges else ())

    def of(self, g: Graph, nodes: Optional[dict] = None, edges: Optional[dict] = None,
           default=0) -> ItemMap:
        """Annotation from partial node/edge maps (``"*"`` accepted), ``default`` elsewhere."""
        return self.from_json(g, {"nodes": nodes or {}, "edges": edges or {}}, default)


@dataclass(frozen=True)
class MultiplicityFunctor(_CountingFunctor):
    """``B^n``: multiplicities of nodes and edges, summed along morphisms."""
    n: int = 2
    name = "mult"
    has_red = True
    with_edges = True

    def apply(self, phi: GraphMorphism, a: ItemMap) -> ItemMap:
        self._require_host(phi.dom, a)
        nidx, eidx = _index_maps(phi)
        n = self.n
        cod = phi.cod
        nv = [0] * len(cod.nodes)
        for i, x in zip(nidx, a.node_vals):
            s = nv[i] + x
            nv[i] = STAR if s > n else s
        ev = [0] * len(cod.edges)
        for i, x in zip(eidx, a.edge_vals):
            s = ev[i] + x
            ev[i] = STAR if s > n else s
        return ItemMap(cod.nodes, tuple(nv), cod.edge_ids, tuple(ev))

    def standard(self, g: Graph) -> ItemMap:
        return self.const(g, 1)

    def red(self, phi: GraphMorphism, b: ItemMap) -> ItemMap:
        if not is_mono(phi):
            raise GraphError("non-mono input: reduction is defined along monos")
        self._require_host(phi.cod, b)
        nidx, eidx = _index_maps(phi)
        nv, ev = b.node_vals, b.edge_vals
        return ItemMap(phi.dom.nodes, tuple(nv[i] for i in nidx),
                       phi.dom.edge_ids, tuple(ev[i] for i in eidx))


def _index_maps(phi: GraphMorphism) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Positions in the codomain's item order of the images of the domain's items."""
    got = phi.memo.get("index")
    if got is None:
        npos = {v: i for i, v in enumerate(phi.cod.nodes)}
        epos = {e: i for i, e in enumerate(phi.cod.edge_ids)}
        got = (tuple(npos[phi.node_map[v]] for v in phi.dom.nodes),
               tuple(epos[phi.edge_map[e]] for e in phi.dom.edge_ids))
        phi.memo["index"] = got
    return got


@dataclass(frozen=True)
class OutDegreeFunctor(_CountingFunctor):
    """``S^n``: a value per node, joined by supremum along morphisms."""
    n: int = 2
    name = "outdeg"
    has_red = False
    with_edges = False

    def apply(self, phi: GraphMorphism, a: ItemMap) -> ItemMap:
        self._require_host(phi.dom, a)
        nidx, _ = _index_maps(phi)
        nv = [0] * len(phi.cod.nodes)
        for i, x in zip(nidx, a.node_vals):
            if x > nv[i]:
                nv[i] = x
        return ItemMap(phi.cod.nodes, tuple(nv))

    def standard(self, g: Graph) -> ItemMap:
        m = CountingMonoid(self.n)
        return ItemMap(g.nodes, tuple(m.cap(g.out_degree(v)) for v in g.nodes))


@dataclass(frozen=True)
class PathFunctor(AnnotationFunctor):
    """``T``: path sets, mapped by taking images of pairs."""
    name = "path"
    has_red = False

    def monoid(self, g: Graph) -> PathMonoid:
        return PathMonoid(g)

    def apply(self, phi: GraphMorphism, a: PathSet) -> PathSet:
        if a.host != phi.dom:
            raise GraphError("host mismatch: path set belongs to a different graph")
        return PathSet(phi.cod, frozenset((phi.node_map[u], phi.node_map[v]) for u, v in a.pairs))

    def standard(self, g: Graph) -> PathSet:
        return PathSet(g, transitive_closure(g))

    def to_json(self, g: Graph, a: PathSet) -> dict:
        return {"pairs": [list(p) for p in sorted(a.pairs)]}

    def from_json(self, g: Graph, data: Optional[dict], default) -> PathSet:
        if data is None or "pairs" not in data:
            return default
        return PathSet(g, frozenset(tuple(p) for p in data["pairs"]))


def mult_functor(n: int = 2) -> MultiplicityFunctor:
    if n < 1:
        raise ValueError("n must be at least 1")
    return MultiplicityFunctor(n)


def outdeg_functor(n: int = 2) -> OutDegreeFunctor:
    if n < 1:
        raise ValueError("n must be at least 1")
    return OutDegreeFunctor(n)


def path_functor() -> PathFunctor:
    return PathFunctor()


def functor_by_name(name: str, n: int = 2) -> AnnotationFunctor:
    if name == "mult":
        return mult_functor(n)
    if name == "outdeg":
        return outdeg_functor(n)
    if name == "path":
        return path_functor()
    raise ValueError(f"unknown functor {name!r} (expected mult, outdeg or path)")


# -- property battery ------------------------------------------------------------

PROPERTIES = ("homomorphism", "adjunction", "pushout", "pushout_standard", "beck_chevalley",
              "isomorphism")
NEEDS_RED = {"adjunction", "pushout", "beck_chevalley"}


@dataclass
class PropertyReport:
    property: str
    functor: str
    passed: bool
    counterexample: Optional[dict] = None
    capability_absent: bool = False
    exhaustive: bool = True
    cases: int = 0

    def to_dict(self) -> dict:
        return {"property": self.property, "functor": self.functor, "passed": self.passed,
                "capability_absent": self.capability_absent, "exhaustive": self.exhaustive,
                "cases": self.cases, "counterexample": self.counterexample}


class _Found(Exception):
    def __init__(self, info: dict):
        self.info = info


class _Sampler:
    """Annotations to quantify over: all of them when few, else a seeded sample."""

    def __init__(self, functor: AnnotationFunctor, limit: int, seed: int):
        self.functor = functor
        self.limit = limit
        self.rng = random.Random(seed)
        self.exhaustive = True
        self._singles: dict[Graph, list] = {}
        self._pairs: dict[Graph, list] = {}

    def singles(self, g: Graph) -> list:
        got = self._singles.get(g)
        if got is None:
            got = self._singles[g] = self._draw_singles(g)
        return got

    def pairs(self, g: Graph) -> list:
        got = self._pairs.get(g)
        if got is None:
            got = self._pairs[g] = self._draw_pairs(g)
        return got

    def _draw_singles(self, g: Graph) -> list:
        m = self.functor.monoid(g)
        if m.size() <= self.limit:
            return list(m.elements())
        self.exhaustive = False
        out = [m.zero, m.top, self.functor.standard(g)]
        while len(out) < self.limit:
            out.append(m.random_element(self.rng))
        return out

    def _draw_pairs(self, g: Graph) -> list:
        m = self.functor.monoid(g)
        limit = 4 * self.limit
        if m.size() ** 2 <= limit:
            xs = list(m.elements())
            return [(a, b) for a in xs for b in xs]
        self.exhaustive = False
        ext = [m.zero, m.top, self.functor.standard(g)]
        out = [(a, b) for a in ext for b in ext]
        while len(out) < limit:
            out.append((m.random_element(self.rng), m.random_element(self.rng)))
        return out


def _fmt(functor: AnnotationFunctor, g: Graph, a) -> Any:
    return functor.to_json(g, a)


def _graph_dict(g: Graph) -> dict:
    return {"nodes": list(g.nodes),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt, "label": e.label} for e in g.edges]}


def _morph_dict(f: GraphMorphism) -> dict:
    return {"from": _graph_dict(f.dom), "to": _graph_dict(f.cod),
            "nodes": dict(sorted(f.node_map.items())), "edges": dict(sorted(f.edge_map.items()))}


def mono_pairs(graphs: Iterable[Graph]) -> Iterator[GraphMorphism]:
    """One inclusion ``A >-> B`` per isomorphism class of monos into the given graphs."""
    for b in graphs:
        seen = set()
        for a in subgraphs(b):
            key = canonical_form(b, {v: a.has_node(v) for v in b.nodes},
                                 {e: a.has_edge(e) for e in b.edge_ids})
            if key not in seen:
                seen.add(key)
                yield inclusion(a, b)


def pushout_squares(graphs: Iterable[Graph]) -> Iterator[tuple[GraphMorphism, ...]]:
    """Pushout squares of monos ``(phi1: A->B, phi2: A->C, psi1: B->D, psi2: C->D)``.

    Up to isomorphism these are pairs of subgraphs ``B, C`` of ``D`` covering
    ``D``, with ``A`` their intersection.
    """
    for d in graphs:
        subs = list(subgraphs(d))
        seen = set()
        for b in subs:
            for c in subs:
                if set(b.nodes) | set(c.nodes) != set(d.nodes):
                    continue
                if set(b.edge_ids) | set(c.edge_ids) != set(d.edge_ids):
                    continue
                key = canonical_form(d, {v: (b.has_node(v), c.has_node(v)) for v in d.nodes},
                                     {e: (b.has_edge(e), c.has_edge(e)) for e in d.edge_ids})
                if key in seen:
                    continue
                seen.add(key)
                a = d.subgraph([v for v in b.nodes if c.has_node(v)],
                               [e for e in b.edge_ids if c.has_edge(e)])
                yield inclusion(a, b), inclusion(a, c), inclusion(b, d), inclusion(c, d)


def _automorphisms(g: Graph) -> list[GraphMorphism]:
    return list(enumerate_homs(g, g, mono=True))


def pullback_squares(graphs: list[Graph]) -> Iterator[tuple[GraphMorphism, ...]]:
    """Pullback squares ``(phi1: A>->B, phi2: A->C, psi1: B->D, psi2: C>->D)``.

    ``psi2`` ranges over subgraph inclusions and ``psi1`` over all morphisms,
    one per orbit under automorphisms of ``B`` and of ``D`` fixing ``C``;
    ``A`` is the preimage of ``C`` under ``psi1``.
    """
    auts = {g: _automorphisms(g) for g in graphs}
    for d in graphs:
        seen = set()
        for c in subgraphs(d):
            key = canonical_form(d, {v: c.has_node(v) for v in d.nodes},
                                 {e: c.has_edge(e) for e in d.edge_ids})
            if key in seen:
                continue
            seen.add(key)
            psi2 = inclusion(c, d)
            fix_c = [a for a in auts[d]
                     if all(c.has_node(a.node_map[v]) for v in c.nodes)
                     and all(c.has_edge(a.edge_map[e]) for e in c.edge_ids)]
            for b in graphs:
                orbits: set[tuple] = set()
                for psi1 in enumerate_homs(b, d):
                    if psi1.key() in orbits:
                        continue
                    for beta in auts[b]:
                        for delta in fix_c:
                            orbits.add(compose(compose(beta, psi1), delta).key())
                    a = b.subgraph([v for v in b.nodes if c.has_node(psi1.node_map[v])],
                                   [e for e in b.edge_ids if c.has_edge(psi1.edge_map[e])])
                    phi1 = inclusion(a, b)
                    phi2 = GraphMorphism(a, c, {v: psi1.node_map[v] for v in a.nodes},
                                         {e: psi1.edge_map[e] for e in a.edge_ids})
                    yield phi1, phi2, psi1, psi2


def _homomorphism(functor, graphs, sampler, count):
    for phi in mono_pairs(graphs):
        ma, mb = functor.monoid(phi.dom), functor.monoid(phi.cod)
        count()
        if functor.apply(phi, ma.zero) != mb.zero:
            raise _Found({"morphism": _morph_dict(phi), "law": "A_phi(0) = 0"})
        for a, b in sampler.pairs(phi.dom):
            for law, lhs, rhs in (
                ("A_phi(a + b) = A_phi(a) + A_phi(b)", functor.apply(phi, ma.plus(a, b)),
                 mb.plus(functor.apply(phi, a), functor.apply(phi, b))),
                ("A_phi(a - b) = A_phi(a) - A_phi(b)", functor.apply(phi, ma.minus(a, b)),
                 mb.minus(functor.apply(phi, a), functor.apply(phi, b))),
            ):
                if lhs != rhs:
                    raise _Found({"morphism": _morph_dict(phi), "law": law,
                                  "a": _fmt(functor, phi.dom, a), "b": _fmt(functor, phi.dom, b)})
            if ma.leq(a, b) and not mb.leq(functor.apply(phi, a), functor.apply(phi, b)):
                raise _Found({"morphism": _morph_dict(phi), "law": "monotone",
                              "a": _fmt(functor, phi.dom, a), "b": _fmt(functor, phi.dom, b)})


def _adjunction(functor, graphs, sampler, count):
    for phi in mono_pairs(graphs):
        a_g, b_g = phi.dom, phi.cod
        ma, mb = functor.monoid(a_g), functor.monoid(b_g)
        count()
        if functor.red(phi, functor.standard(b_g)) != functor.standard(a_g):
            raise _Found({"morphism": _morph_dict(phi), "law": "red(s_B) = s_A"})
        if functor.red(phi, mb.zero) != ma.zero:
            raise _Found({"morphism": _morph_dict(phi), "law": "red(0) = 0"})
        for a in sampler.singles(a_g):
            if not ma.leq(a, functor.red(phi, functor.apply(phi, a))):
                raise _Found({"morphism": _morph_dict(phi), "law": "a <= red(A_phi(a))",
                              "a": _fmt(functor, a_g, a)})
        for b in sampler.singles(b_g):
            if not mb.leq(functor.apply(phi, functor.red(phi, b)), b):
                raise _Found({"morphism": _morph_dict(phi), "law": "A_phi(red(b)) <= b",
                              "b": _fmt(functor, b_g, b)})
        for b, c in sampler.pairs(b_g):
            rb, rc = functor.red(phi, b), functor.red(phi, c)
            checks = (
                ("red(b + c) = red(b) + red(c)", functor.red(phi, mb.plus(b, c)) == ma.plus(rb, rc)),
                ("red(b - c) = red(b) - red(c)", functor.red(phi, mb.minus(b, c)) == ma.minus(rb, rc)),
                ("red monotone", not mb.leq(b, c) or ma.leq(rb, rc)),
            )
            for law, ok in checks:
                if not ok:
                    raise _Found({"morphism": _morph_dict(phi), "law": law,
                                  "b": _fmt(functor, b_g, b), "c": _fmt(functor, b_g, c)})


def _square_info(sq) -> dict:
    return {name: _morph_dict(f) for name, f in zip(("phi1", "phi2", "psi1", "psi2"), sq)}


def _pushout(functor, graphs, sampler, count):
    for sq in pushout_squares(graphs):
        phi1, phi2, psi1, psi2 = sq
        d_g = psi1.cod
        eta = compose(phi1, psi1)
        md = functor.monoid(d_g)
        count()
        for d in sampler.singles(d_g):
            rhs = md.plus(functor.apply(psi1, functor.red(psi1, d)),
                          md.minus(functor.apply(psi2, functor.red(psi2, d)),
                                   functor.apply(eta, functor.red(eta, d))))
            if rhs != d:
                raise _Found({**_square_info(sq), "d": _fmt(functor, d_g, d),
                              "recombined": _fmt(functor, d_g, rhs)})


def _pushout_standard(functor, graphs, sampler, count):
    for sq in pushout_squares(graphs):
        phi1, phi2, psi1, psi2 = sq
        d_g = psi1.cod
        eta = compose(phi1, psi1)
        md = functor.monoid(d_g)
        count()
        rhs = md.plus(functor.apply(psi1, functor.standard(psi1.dom)),
                      md.minus(functor.apply(psi2, functor.standard(psi2.dom)),
                               functor.apply(eta, functor.standard(eta.dom))))
        if rhs != functor.standard(d_g):
            raise _Found({**_square_info(sq), "s_D": _fmt(functor, d_g, functor.standard(d_g)),
                          "recombined": _fmt(functor, d_g, rhs)})


def _beck_chevalley(functor, graphs, sampler, count):
    for sq in pullback_squares(graphs):
        phi1, phi2, psi1, psi2 = sq
        count()
        for b in sampler.singles(phi1.cod):
            lhs = functor.apply(phi2, functor.red(phi1, b))
            rhs = functor.red(psi2, functor.apply(psi1, b))
            if lhs != rhs:
                raise _Found({**_square_info(sq), "b": _fmt(functor, phi1.cod, b),
                              "lhs": _fmt(functor, phi2.cod, lhs), "rhs": _fmt(functor, phi2.cod, rhs)})


def legal_standard(functor: AnnotationFunctor, phi: GraphMorphism) -> bool:
    """Is ``phi: X[s_X, s_X] -> Y[s_Y, s_Y]`` legal?"""
    pushed = functor.apply(phi, functor.standard(phi.dom))
    target = functor.standard(phi.cod)
    return functor.leq(phi.cod, target, pushed) and functor.leq(phi.cod, pushed, target)


def _isomorphism(functor, graphs, sampler, count):
    for x in graphs:
        for y in graphs:
            for phi in enumerate_homs(x, y):
                count()
                if legal_standard(functor, phi) and not is_iso(phi):
                    raise _Found({"morphism": _morph_dict(phi),
                                  "law": "legal arrow between standard annotations is an iso"})


_CHECKS: dict[str, Callable] = {
    "homomorphism": _homomorphism,
    "adjunction": _adjunction,
    "pushout": _pushout,
    "pushout_standard": _pushout_standard,
    "beck_chevalley": _beck_chevalley,
    "isomorphism": _isomorphism,
}


def check_property(functor: AnnotationFunctor, which: str, bound: int = 3, *,
                   max_edges: Optional[int] = None, labels: tuple[str, ...] = ("a",),
                   max_annotations: int = 16, seed: int = 0) -> PropertyReport:
    """Test one annotation property on all graphs with at most ``bound`` nodes.

    Graphs have at most ``max_edges`` edges (default ``bound``).  Quantifiers
    over annotations are exhaustive when the carrier has at most
    ``max_annotations`` elements (``4 * max_annotations`` for laws over pairs)
    and a seeded sample containing zero, top and the standard annotation
    otherwise; the
    report's ``exhaustive`` flag says which happened.
    """
    if which not in _CHECKS:
        raise ValueError(f"unknown property {which!r}; expected one of {', '.join(PROPERTIES)}")
    if which in NEEDS_RED and not functor.has_red:
        return PropertyReport(which, _functor_label(functor), False, capability_absent=True,
                              counterexample={"reason": f"capability absent: {functor.name} "
                                                        "has no reduction along monos"})
    graphs = enumerate_graphs(EnumerationBudget(bound, bound if max_edges is None else max_edges,
                                                tuple(labels)))
    sampler = _Sampler(functor, max_annotations, seed)
    cases = 0

    def count():
        nonlocal cases
        cases += 1

    try:
        _CHECKS[which](functor, graphs, sampler, count)
    except _Found as found:
        return PropertyReport(which, _functor_label(functor), False, found.info,
                              exhaustive=sampler.exhaustive, cases=cases)
    return PropertyReport(which, _functor_label(functor), True, exhaustive=sampler.exhaustive,
                          cases=cases)


def check_all_properties(functor: AnnotationFunctor, bound: int = 3, **kw) -> list[PropertyReport]:
    return [check_property(functor, which, bound, **kw) for which in PROPERTIES]


def _functor_label(functor: AnnotationFunctor) -> str:
    n = getattr(functor, "n", None)
    return functor.name if n is None else f"{functor.name}^{n}"


# -- functor laws ------------------------------------------------------------------

def check_functor_laws(functor: AnnotationFunctor, bound: int = 3, *,
                       max_edges: Optional[int] = None, max_annotations: int = 16,
                       seed: int = 0) -> PropertyReport:
    """``A_id = id`` and ``A_{g.f} = A_g . A_f`` on composable pairs among small graphs."""
    graphs = enumerate_graphs(EnumerationBudget(bound, bound if max_edges is None else max_edges))
    sampler = _Sampler(functor, max_annotations, seed)
    cases = 0
    homs: dict[tuple[int, int], list[GraphMorphism]] = {}
    for i, x in enumerate(graphs):
        for j, y in enumerate(graphs):
            homs[i, j] = list(enumerate_homs(x, y))
    try:
        for i, x in enumerate(graphs):
            samples = sampler.singles(x)
            ident = identity(x)
            for a in samples:
                if functor.apply(ident, a) != a:
                    raise _Found({"law": "A_id = id", "graph": _graph_dict(x),
                                  "a": _fmt(functor, x, a)})
            for j in range(len(graphs)):
                for f in homs[i, j]:
                    pushed = [functor.apply(f, a) for a in samples]
                    for k in range(len(graphs)):
                        for g in homs[j, k]:
                            cases += 1
                            gf = compose(f, g)
                            for a, fa in zip(samples, pushed):
                                if functor.apply(gf, a) != functor.apply(g, fa):
                                    raise _Found({"law": "A_(g.f) = A_g . A_f",
                                                  "f": _morph_dict(f), "g": _morph_dict(g),
                                                  "a": _fmt(functor, x, a)})
    except _Found as found:
        return PropertyReport("functor_laws", _functor_label(functor), False, found.info,
                              exhaustive=sampler.exhaustive, cases=cases)
    return PropertyReport("functor_laws", _functor_label(functor), True,
                          exhaustive=sampler.exhaustive, cases=cases)
