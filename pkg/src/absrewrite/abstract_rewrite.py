"""Abstract rewriting of doubly annotated graphs.

An annotated graph ``A[a1, a2]`` stands for every graph ``X`` with a legal
arrow ``X[s_X, s_X] -> A[a1, a2]``.  A rewriting step first materializes the
left-hand side out of ``A`` (rewritable materialization), chooses annotations
for the materialization, rewrites it with the double-pushout construction and
recomputes the annotations of the result by inclusion-exclusion.

Two variants of the step exist: ``SQUIGGLE`` only requires the upper bound of
the materialization to cover the left-hand side; ``HOOK`` requires both bounds
to reduce to the standard annotation of the left-hand side, which needs the
functor's reduction ``red`` and yields complete (not only sound) steps.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional

from .annotation import (STAR, AnnotationFunctor, CapabilityAbsent, ItemMap, MultiplicityFunctor,
                         PROPERTIES, check_property)
from .dpo import DpoTrace, Production, dpo_step
from .enumeration import EnumerationBudget, canonical_form, enumerate_over
from .graph import Graph, GraphError, GraphMorphism, compose, enumerate_homs, enumerate_monos
from .materialization import RewritableMaterialization, rewritable_materialize

SQUIGGLE = "squiggle"
HOOK = "hook"
MODES = (SQUIGGLE, HOOK)

# exhaustive annotation search refuses carriers larger than this
GENERIC_LIMIT = 1 << 16


@dataclass(frozen=True)
class AnnotatedGraph:
    """``A[lower, upper]``; no order between the bounds is required."""
    graph: Graph
    lower: Any
    upper: Any
    functor: AnnotationFunctor

    def __post_init__(self):
        # leq performs the host checks
        self.functor.leq(self.graph, self.functor.zero(self.graph), self.lower)
        self.functor.leq(self.graph, self.functor.zero(self.graph), self.upper)

    def __repr__(self) -> str:
        return f"AnnotatedGraph({self.graph!r}, lower={self.lower!r}, upper={self.upper!r})"


def annotate(graph: Graph, functor: AnnotationFunctor, lower=None, upper=None) -> AnnotatedGraph:
    """Annotated graph with ``[0, top]`` wherever a bound is not given."""
    return AnnotatedGraph(graph, functor.zero(graph) if lower is None else lower,
                          functor.top(graph) if upper is None else upper, functor)


def standard_annotated(x: Graph, functor: AnnotationFunctor) -> AnnotatedGraph:
    s = functor.standard(x)
    return AnnotatedGraph(x, s, s, functor)


def _same_functor(a: AnnotatedGraph, b: AnnotatedGraph) -> AnnotationFunctor:
    if a.functor != b.functor:
        raise GraphError("functor mismatch: annotated graphs use different annotation functors")
    return a.functor


def is_legal(psi: GraphMorphism, src: AnnotatedGraph, dst: AnnotatedGraph) -> bool:
    """``A_psi(src.lower) >= dst.lower`` and ``A_psi(src.upper) <= dst.upper``."""
    f = _same_functor(src, dst)
    if psi.dom != src.graph or psi.cod != dst.graph:
        raise GraphError("object mismatch: morphism does not connect the annotated graphs")
    g = dst.graph
    return f.leq(g, dst.lower, f.apply(psi, src.lower)) and f.leq(g, f.apply(psi, src.upper), dst.upper)


def is_legal_concrete(psi: GraphMorphism, dst: AnnotatedGraph) -> bool:
    """Is ``psi: X[s_X, s_X] -> dst`` legal?"""
    f = dst.functor
    pushed = f.apply(psi, f.standard(psi.dom))
    return f.leq(dst.graph, dst.lower, pushed) and f.leq(dst.graph, pushed, dst.upper)


def member(x: Graph, a: AnnotatedGraph) -> Optional[GraphMorphism]:
    """The first legal ``X[s_X, s_X] -> A[a1, a2]`` in enumeration order, if any."""
    if isinstance(a.functor, MultiplicityFunctor):
        return _member_counting(x, a)
    return member_by_scan(x, a)


def member_by_scan(x: Graph, a: AnnotatedGraph) -> Optional[GraphMorphism]:
    """:func:`member` by testing every morphism ``X -> A``."""
    for psi in enumerate_homs(x, a.graph):
        if is_legal_concrete(psi, a):
            return psi
    return None


def _count_limits(f: MultiplicityFunctor, ids, lower: tuple, upper: tuple
                  ) -> tuple[dict, dict]:
    """Per item: the most preimages allowed (``None``: unlimited) and the fewest needed."""
    caps = {i: None if hi == STAR else int(hi) for i, hi in zip(ids, upper)}
    needs = {i: f.n + 1 if lo == STAR else int(lo) for i, lo in zip(ids, lower)}
    return caps, needs


def _shortfall(count: dict, needs: dict) -> int:
    return sum(max(0, k - count[i]) for i, k in needs.items())


def _member_counting(x: Graph, a: AnnotatedGraph) -> Optional[GraphMorphism]:
    """Backtracking membership for multiplicities, pruned by the preimage counts.

    Explores morphisms in the order of :func:`enumerate_homs` and only cuts
    branches that cannot be legal, so it returns the same witness.
    """
    f, g = a.functor, a.graph
    ncap, nneed = _count_limits(f, a.lower.node_ids, a.lower.node_vals, a.upper.node_vals)
    ecap, eneed = _count_limits(f, a.lower.edge_ids, a.lower.edge_vals, a.upper.edge_vals)
    if len(x.nodes) < _shortfall(dict.fromkeys(g.nodes, 0), nneed) or \
            len(x.edges) < _shortfall(dict.fromkeys(g.edge_ids, 0), eneed):
        return None
    buckets: dict[tuple, list[str]] = {}
    for e in g.edges:
        buckets.setdefault((e.src, e.tgt, e.label), []).append(e.id)
    nodes, edges = x.nodes, x.edges
    pos = {v: i for i, v in enumerate(nodes)}
    ready: list[list] = [[] for _ in nodes]
    for e in edges:
        ready[max(pos[e.src], pos[e.tgt])].append(e)
    nm: dict[str, str] = {}
    ncount = dict.fromkeys(g.nodes, 0)
    ecount = dict.fromkeys(g.edge_ids, 0)
    em: dict[str, str] = {}

    def fits(cap, count) -> bool:
        return cap is None or count < cap

    def assign_edges(j: int) -> bool:
        if len(edges) - j < _shortfall(ecount, eneed):
            return False
        if j == len(edges):
            return True
        e = edges[j]
        for c in buckets.get((nm[e.src], nm[e.tgt], e.label), ()):
            if not fits(ecap[c], ecount[c]):
                continue
            em[e.id] = c
            ecount[c] += 1
            if assign_edges(j + 1):
                return True
            ecount[c] -= 1
            del em[e.id]
        return False

    def assign_nodes(i: int) -> bool:
        if len(nodes) - i < _shortfall(ncount, nneed):
            return False
        if i == len(nodes):
            return assign_edges(0)
        v = nodes[i]
        for w in g.nodes:
            if not fits(ncap[w], ncount[w]):
                continue
            nm[v] = w
            if all((nm[e.src], nm[e.tgt], e.label) in buckets for e in ready[i]):
                ncount[w] += 1
                if assign_nodes(i + 1):
                    return True
                ncount[w] -= 1
            del nm[v]
        return False

    if not assign_nodes(0):
        return None
    return GraphMorphism(x, g, dict(nm), dict(em), check=False)


def enumeration_bounds(a: AnnotatedGraph) -> dict:
    """Preimage caps and minimums implied by the bounds (multiplicities only).

    They restrict typed enumeration over ``a.graph`` without losing any legal
    instance; other functors get no restriction.
    """
    f = a.functor
    if not isinstance(f, MultiplicityFunctor):
        return {}
    out: dict[str, dict[str, int]] = {"node_caps": {}, "edge_caps": {}, "node_mins": {},
                                      "edge_mins": {}}
    for kind, ids, lo, hi in (("node", a.lower.node_ids, a.lower.node_vals, a.upper.node_vals),
                              ("edge", a.lower.edge_ids, a.lower.edge_vals, a.upper.edge_vals)):
        for item, l, h in zip(ids, lo, hi):
            if h != STAR:
                out[f"{kind}_caps"][item] = int(h)
            if l == STAR:
                out[f"{kind}_mins"][item] = f.n + 1
            elif l > 0:
                out[f"{kind}_mins"][item] = int(l)
    return out


def legal_instances(a: AnnotatedGraph, budget: EnumerationBudget
                    ) -> Iterator[tuple[Graph, GraphMorphism]]:
    """Pairs ``(X, psi)`` with ``psi: X[s_X, s_X] -> A`` legal, within the budget.

    Every such pair occurs at least once up to isomorphism over ``A``.
    """
    for x, psi in enumerate_over(a.graph, budget.max_nodes, budget.max_edges,
                                 **enumeration_bounds(a)):
        if is_legal_concrete(psi, a):
            yield x, psi


# -- annotated rewritable materialization ------------------------------------------

@dataclass(frozen=True)
class AnnotatedMaterialization:
    rm: RewritableMaterialization
    lower: Any
    upper: Any
    mode: str

    def annotated(self, functor: AnnotationFunctor) -> AnnotatedGraph:
        return AnnotatedGraph(self.rm.rmat, self.lower, self.upper, functor)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected {SQUIGGLE!r} or {HOOK!r}")


def minimal_elements(xs: Iterable, leq: Callable[[Any, Any], bool]) -> list:
    """Minimal elements of a finite poset, in order of first occurrence."""
    mins: list = []
    for x in xs:
        if any(leq(m, x) for m in mins):
            continue
        mins = [m for m in mins if not leq(x, m)]
        mins.append(x)
    return mins


def maximal_elements(xs: Iterable, leq: Callable[[Any, Any], bool]) -> list:
    return minimal_elements(xs, lambda x, y: leq(y, x))


def _all_annotations(f: AnnotationFunctor, g: Graph) -> list:
    m = f.monoid(g)
    if m.size() > GENERIC_LIMIT:
        raise ValueError(f"annotation lattice of size {m.size()} too large for exhaustive search")
    return list(m.elements())


def _generic_bounds(a: AnnotatedGraph, rm: RewritableMaterialization, mode: str):
    f = a.functor
    rmat = rm.rmat
    s_l = f.standard(rm.n_l.dom)
    lhs_on_rmat = f.apply(rm.n_l, s_l)
    cands = _all_annotations(f, rmat)

    def pinned(x) -> bool:
        return mode != HOOK or f.red(rm.n_l, x) == s_l

    lows = [x for x in cands if pinned(x) and f.leq(a.graph, a.lower, f.apply(rm.psi, x))]
    ups = [x for x in cands if pinned(x) and f.leq(a.graph, f.apply(rm.psi, x), a.upper)
           and (mode == HOOK or f.leq(rmat, lhs_on_rmat, x))]
    leq = functools.partial(f.leq, rmat)
    return minimal_elements(lows, leq), maximal_elements(ups, leq)


def _compositions(total: int, floors: list[int]) -> Iterator[tuple[int, ...]]:
    """Integer vectors ``v >= floors`` with ``sum(v) == total``."""
    if not floors:
        if total == 0:
            yield ()
        return
    rest_floor = sum(floors[1:])
    for v in range(floors[0], total - rest_floor + 1):
        for tail in _compositions(total - v, floors[1:]):
            yield (v,) + tail


def _min_vectors(n_free: int, pinned: int, target, n: int) -> list[tuple]:
    """Minimal free parts ``v`` with ``pinned + sum(v) >= target`` in ``M_n``."""
    have = STAR if pinned > n else pinned
    if target == 0 or have >= target:
        return [(0,) * n_free]
    if n_free == 0:
        return []
    need = (n + 1 if target == STAR else target) - pinned
    out = [v for v in _compositions(need, [0] * n_free) if all(x <= n for x in v)]
    if target == STAR and pinned == 0:
        out += [tuple(STAR if i == j else 0 for i in range(n_free)) for j in range(n_free)]
    return out


def _max_vectors(floors: list[int], pinned: int, bound, n: int) -> list[tuple]:
    """Maximal free parts ``v >= floors`` with ``pinned + sum(v) <= bound`` in ``M_n``."""
    if bound == STAR:
        return [(STAR,) * len(floors)]
    if pinned + sum(floors) > bound:
        return []
    if not floors:
        return [()]
    return list(_compositions(int(bound) - pinned, floors))


def _mult_bounds(a: AnnotatedGraph, rm: RewritableMaterialization, mode: str):
    """Per-item closed form of the minimal lower and maximal upper bounds for ``B^n``."""
    f = a.functor
    n = f.n
    rmat = rm.rmat
    in_lhs_nodes = rm.n_l.node_image()
    in_lhs_edges = rm.n_l.edge_image()
    per_kind = []
    for ids, image_of, in_lhs, a_ids, lo, hi in (
            (rmat.nodes, rm.psi.node_map, in_lhs_nodes, a.lower.node_ids, a.lower.node_vals,
             a.upper.node_vals),
            (rmat.edge_ids, rm.psi.edge_map, in_lhs_edges, a.lower.edge_ids, a.lower.edge_vals,
             a.upper.edge_vals)):
        pre: dict[str, list[str]] = {y: [] for y in a_ids}
        for x in ids:
            pre[image_of[x]].append(x)
        groups = []
        for y, l, h in zip(a_ids, lo, hi):
            xs = pre[y]
            if mode == HOOK:
                fixed = [x for x in xs if x in in_lhs]
                free = [x for x in xs if x not in in_lhs]
                lows = _min_vectors(len(free), len(fixed), l, n)
                ups = _max_vectors([0] * len(free), len(fixed), h, n)
            else:
                fixed = []
                free = xs
                lows = _min_vectors(len(free), 0, l, n)
                ups = _max_vectors([1 if x in in_lhs else 0 for x in free], 0, h, n)
            if not lows or not ups:
                return [], []
            groups.append((fixed, free, lows, ups))
        per_kind.append(groups)

    def assemble(which: int) -> list[ItemMap]:
        kinds = []
        for groups in per_kind:
            options = []
            for fixed, free, lows, ups in groups:
                vecs = lows if which == 0 else ups
                options.append([dict([(x, 1) for x in fixed] + list(zip(free, v))) for v in vecs])
            kinds.append(options)
        out = []
        for nchoice in itertools.product(*kinds[0]):
            nv: dict = {}
            for d in nchoice:
                nv.update(d)
            for echoice in itertools.product(*kinds[1]):
                ev: dict = {}
                for d in echoice:
                    ev.update(d)
                out.append(ItemMap(rmat.nodes, tuple(nv[v] for v in rmat.nodes),
                                   rmat.edge_ids, tuple(ev[e] for e in rmat.edge_ids)))
        return out

    return assemble(0), assemble(1)


def annotated_materializations(a: AnnotatedGraph, phi: GraphMorphism, phi_l: GraphMorphism,
                               mode: str = SQUIGGLE, *, method: str = "auto",
                               rm: Optional[RewritableMaterialization] = None
                               ) -> list[AnnotatedMaterialization]:
    """All interval-maximal annotation pairs of the rewritable materialization.

    The constraints on the lower and on the upper bound are independent, so
    the maximal pairs are the minimal admissible lower bounds combined with the
    maximal admissible upper bounds.  Pairs whose lower bound exceeds the
    upper bound somewhere have an empty language and are dropped; every legal
    instance lies in one of the remaining pairs.  ``method`` selects the closed form for
    multiplicities (``"fast"``), exhaustive search (``"generic"``) or the best
    available (``"auto"``).
    """
    _check_mode(mode)
    f = a.functor
    if mode == HOOK and not f.has_red:
        raise CapabilityAbsent(f"capability absent: mode {HOOK!r} needs a reduction, "
                               f"which {f.name} does not provide")
    if phi.cod != a.graph:
        raise GraphError("object mismatch: phi does not land in the annotated graph")
    if rm is None:
        rm = rewritable_materialize(phi, phi_l)
    fast = isinstance(f, MultiplicityFunctor)
    if method == "fast" and not fast:
        raise CapabilityAbsent(f"capability absent: no closed form for {f.name}")
    if method not in ("auto", "fast", "generic"):
        raise ValueError(f"unknown method {method!r}")
    if fast and method != "generic":
        lows, ups = _mult_bounds(a, rm, mode)
    else:
        lows, ups = _generic_bounds(a, rm, mode)
    rmat = rm.rmat
    return [AnnotatedMaterialization(rm, lo, up, mode) for lo in lows for up in ups
            if f.leq(rmat, lo, up)]


# -- abstract rewriting steps ---------------------------------------------------------

@dataclass(frozen=True)
class AbstractStep:
    materialization: AnnotatedMaterialization
    c1: Any
    c2: Any
    b1: Any
    b2: Any


@dataclass
class AbstractStepResult:
    """Result graph ``B`` with every step and the antichain ``pairs`` of result bounds."""
    mode: str
    functor: AnnotationFunctor
    phi: GraphMorphism
    rm: RewritableMaterialization
    trace: DpoTrace
    steps: list[AbstractStep] = field(default_factory=list)
    pairs: list[tuple[Any, Any]] = field(default_factory=list)

    @property
    def graph(self) -> Graph:
        return self.trace.result

    @property
    def context(self) -> Graph:
        return self.trace.context

    @property
    def comatch(self) -> GraphMorphism:
        return self.trace.comatch

    def annotated(self) -> list[AnnotatedGraph]:
        return [AnnotatedGraph(self.graph, b1, b2, self.functor) for b1, b2 in self.pairs]


def interval_leq(f: AnnotationFunctor, g: Graph, p: tuple, q: tuple) -> bool:
    """``p`` below ``q`` in the interval order: ``q`` is the wider interval."""
    return f.leq(g, q[0], p[0]) and f.leq(g, p[1], q[1])


def _c_bounds_mult(f: MultiplicityFunctor, phi_a: GraphMorphism, d_l: ItemMap, lo: ItemMap,
                   up: ItemMap) -> tuple[list, list]:
    """Least ``c1`` and greatest ``c2`` per item of the context (a subgraph of ``rmat``)."""
    carrier = list(range(f.n + 1)) + [STAR]

    def plus(x, y):
        s = x + y
        return STAR if s > f.n else s

    c_graph = phi_a.dom
    res = []
    for ids, inner, d_vals, lo_vals, up_vals, image in (
            (phi_a.cod.nodes, c_graph.nodes, d_l.node_vals, lo.node_vals, up.node_vals,
             phi_a.node_map),
            (phi_a.cod.edge_ids, c_graph.edge_ids, d_l.edge_vals, lo.edge_vals, up.edge_vals,
             phi_a.edge_map)):
        pos = {x: i for i, x in enumerate(ids)}
        hit = set()
        c1, c2 = [], []
        for x in inner:
            i = pos[image[x]]
            hit.add(i)
            low = next((v for v in carrier if lo_vals[i] <= plus(v, d_vals[i])), None)
            high = next((v for v in reversed(carrier) if plus(v, d_vals[i]) <= up_vals[i]), None)
            if low is None or high is None:
                return [], []
            c1.append(low)
            c2.append(high)
        for i in range(len(ids)):
            if i not in hit and not (lo_vals[i] <= d_vals[i] <= up_vals[i]):
                return [], []
        res.append((tuple(c1), tuple(c2)))
    (n1, n2), (e1, e2) = res
    return ([ItemMap(c_graph.nodes, n1, c_graph.edge_ids, e1)],
            [ItemMap(c_graph.nodes, n2, c_graph.edge_ids, e2)])


def _c_bounds_generic(f: AnnotationFunctor, phi_a: GraphMorphism, d_l, lo, up):
    rmat, c_graph = phi_a.cod, phi_a.dom
    cands = _all_annotations(f, c_graph)
    pushed = {c: f.plus(rmat, f.apply(phi_a, c), d_l) for c in cands}
    lows = [c for c in cands if f.leq(rmat, lo, pushed[c])]
    ups = [c for c in cands if f.leq(rmat, pushed[c], up)]
    leq = functools.partial(f.leq, c_graph)
    return minimal_elements(lows, leq), maximal_elements(ups, leq)


def abstract_step(a: AnnotatedGraph, p: Production, phi: GraphMorphism, mode: str = SQUIGGLE, *,
                  method: str = "auto") -> AbstractStepResult:
    """All abstract rewriting steps of ``a`` with ``p`` at ``phi: L -> A``."""
    _check_mode(mode)
    if phi.dom != p.lhs:
        raise GraphError("object mismatch: phi does not start at the left-hand side")
    f = a.functor
    rm = rewritable_materialize(phi, p.phi_l)
    mats = annotated_materializations(a, phi, p.phi_l, mode, method=method, rm=rm)
    trace = dpo_step(p, rm.n_l)
    if trace is None:  # excluded by construction of the rewritable materialization
        raise AssertionError("rewritable materialization does not admit the rewriting step")
    rmat, b_graph = rm.rmat, trace.result
    s_i = f.standard(p.interface)
    d_l = f.minus(rmat, f.apply(rm.n_l, f.standard(p.lhs)), f.apply(compose(p.phi_l, rm.n_l), s_i))
    d_r = f.minus(b_graph, f.apply(trace.comatch, f.standard(p.rhs)),
                  f.apply(compose(p.phi_r, trace.comatch), s_i))
    phi_a, phi_b = trace.context_to_host, trace.context_to_result
    use_fast = isinstance(f, MultiplicityFunctor) and method != "generic"
    result = AbstractStepResult(mode, f, phi, rm, trace)
    for am in mats:
        if use_fast:
            lows, ups = _c_bounds_mult(f, phi_a, d_l, am.lower, am.upper)
        else:
            lows, ups = _c_bounds_generic(f, phi_a, d_l, am.lower, am.upper)
        for c1 in lows:
            for c2 in ups:
                b1 = f.plus(b_graph, f.apply(phi_b, c1), d_r)
                b2 = f.plus(b_graph, f.apply(phi_b, c2), d_r)
                result.steps.append(AbstractStep(am, c1, c2, b1, b2))
    unique = list(dict.fromkeys((s.b1, s.b2) for s in result.steps))
    result.pairs = [q for q in unique
                    if not any(r != q and interval_leq(f, b_graph, q, r) for r in unique)]
    return result


def strongest_post(a: AnnotatedGraph, p: Production, phi: GraphMorphism, *,
                   method: str = "auto") -> AbstractStepResult:
    """The complete set of ``HOOK`` steps; the union of their languages is the post-image."""
    return abstract_step(a, p, phi, HOOK, method=method)


def decrement_upper(functor: AnnotationFunctor, graph: Graph, b1, b2) -> tuple:
    """A deliberately wrong result: the upper bound lowered by the standard annotation."""
    return b1, functor.minus(graph, b2, functor.standard(graph))


# -- verifiers -------------------------------------------------------------------------

@dataclass
class VerificationReport:
    check: str
    passed: bool
    cases: int = 0
    counterexample: Optional[dict] = None
    refused: bool = False

    def to_dict(self) -> dict:
        return {"check": self.check, "passed": self.passed, "cases": self.cases,
                "refused": self.refused, "counterexample": self.counterexample}


def _graph_dict(g: Graph) -> dict:
    return {"nodes": list(g.nodes),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt, "label": e.label} for e in g.edges]}


def _as_budget(budget: EnumerationBudget | int | tuple) -> EnumerationBudget:
    if isinstance(budget, EnumerationBudget):
        return budget
    if isinstance(budget, int):
        return EnumerationBudget(budget, budget)
    return EnumerationBudget(*budget)


def verify_soundness(a: AnnotatedGraph, p: Production, budget, mode: str = SQUIGGLE, *,
                     phis: Optional[list[GraphMorphism]] = None,
                     perturb: Optional[Callable] = None, method: str = "auto"
                     ) -> VerificationReport:
    """Every concrete step from a member of ``a`` is covered by an abstract step.

    For each ``X`` within the budget with legal ``psi: X -> A`` and each match
    ``m_L`` admitting ``X => Y``, some result pair of the abstract step at
    ``psi . m_L`` must contain ``Y``.  ``phis`` restricts the abstract matches
    considered; ``perturb`` rewrites each result pair (mutation testing).
    """
    budget = _as_budget(budget)
    wanted = None if phis is None else {f.key() for f in phis}
    cache: dict[tuple, list[AnnotatedGraph]] = {}
    cases = 0
    for x, psi in legal_instances(a, budget):
        for m_l in enumerate_monos(p.lhs, x):
            trace = dpo_step(p, m_l)
            if trace is None:
                continue
            phi = compose(m_l, psi)
            if wanted is not None and phi.key() not in wanted:
                continue
            key = phi.key()
            if key not in cache:
                res = abstract_step(a, p, phi, mode, method=method)
                pairs = res.pairs
                if perturb is not None:
                    pairs = [perturb(a.functor, res.graph, b1, b2) for b1, b2 in pairs]
                cache[key] = [AnnotatedGraph(res.graph, b1, b2, a.functor) for b1, b2 in pairs]
            cases += 1
            y = trace.result
            if not any(member(y, bb) is not None for bb in cache[key]):
                return VerificationReport("soundness", False, cases, {
                    "X": _graph_dict(x), "Y": _graph_dict(y),
                    "match": dict(sorted(m_l.node_map.items())),
                    "phi": {"nodes": dict(sorted(phi.node_map.items())),
                            "edges": dict(sorted(phi.edge_map.items()))},
                    "results": len(cache[key])})
    return VerificationReport("soundness", True, cases)


# properties the completeness argument relies on, besides well-behaved subtraction
COMPLETENESS_PROPERTIES = PROPERTIES


@functools.lru_cache(maxsize=None)
def _battery(functor: AnnotationFunctor, bound: int) -> tuple:
    return tuple(check_property(functor, which, bound) for which in COMPLETENESS_PROPERTIES)


def completeness_prerequisites(functor: AnnotationFunctor, bound: int = 2) -> list[dict]:
    """Failed prerequisites of completeness (empty when all hold up to ``bound``)."""
    failed = [r.to_dict() for r in _battery(functor, bound) if not r.passed]
    probe = Graph(["v"])
    if not functor.monoid(probe).well_behaved:
        failed.append({"property": "well_behaved_subtraction", "passed": False})
    return failed


def _preimage_witness(x: Graph, m_l: GraphMorphism, phi: GraphMorphism,
                      a: AnnotatedGraph) -> Optional[GraphMorphism]:
    """A legal ``psi: X -> A`` with ``psi . m_L = phi``."""
    nodes = {m_l.node_map[v]: [phi.node_map[v]] for v in m_l.dom.nodes}
    edges = {m_l.edge_map[e]: [phi.edge_map[e]] for e in m_l.dom.edge_ids}
    for psi in enumerate_homs(x, a.graph, node_allowed=nodes, edge_allowed=edges):
        if is_legal_concrete(psi, a):
            return psi
    return None


def verify_completeness(a: AnnotatedGraph, p: Production, phi: GraphMorphism, budget,
                        mode: str = HOOK, *, check_prerequisites: bool = True,
                        prerequisite_bound: int = 2, method: str = "auto") -> VerificationReport:
    """Every ``Y`` (within the budget) of every result pair is reached from a member of ``a``.

    For each ``Y`` the reversed production is applied at every co-match; the
    resulting ``X`` and match ``m_L`` must admit a legal ``psi: X -> A`` with
    ``psi . m_L = phi``.  Completeness is only claimed for ``HOOK`` steps and
    functors with the full property battery; with ``check_prerequisites`` the
    check refuses to run otherwise.
    """
    budget = _as_budget(budget)
    if check_prerequisites:
        failed = completeness_prerequisites(a.functor, prerequisite_bound)
        if failed:
            return VerificationReport("completeness", False, 0,
                                      {"reason": "annotation properties fail",
                                       "failed_properties": failed}, refused=True)
    res = abstract_step(a, p, phi, mode, method=method)
    rev = p.reversed()
    cases = 0
    for bb in res.annotated():
        seen = set()
        for y, _ in legal_instances(bb, budget):
            key = canonical_form(y)
            if key in seen:
                continue
            seen.add(key)
            cases += 1
            found = False
            for m_r in enumerate_monos(p.rhs, y):
                back = dpo_step(rev, m_r)
                if back is None:
                    continue
                if _preimage_witness(back.result, back.comatch, phi, a) is not None:
                    found = True
                    break
            if not found:
                return VerificationReport("completeness", False, cases, {
                    "Y": _graph_dict(y), "lower": a.functor.to_json(bb.graph, bb.lower),
                    "upper": a.functor.to_json(bb.graph, bb.upper)})
    return VerificationReport("completeness", True, cases)


def verify_terminal(a: AnnotatedGraph, p: Production, budget, mode: str = SQUIGGLE
                    ) -> VerificationReport:
    """Each rewritable member factors legally through an annotated materialization.

    For ``X`` with legal ``psi`` and an applicable match ``m_L``, search
    ``zeta: X -> rmat`` with ``psi' . zeta = psi``, ``zeta . m_L = n_L``, a
    pullback square (only ``m_L`` lands on ``n_L``) and legal for some pair of
    the annotated rewritable materializations.
    """
    budget = _as_budget(budget)
    f = a.functor
    cases = 0
    for x, psi in legal_instances(a, budget):
        for m_l in enumerate_monos(p.lhs, x):
            if dpo_step(p, m_l) is None:
                continue
            cases += 1
            phi = compose(m_l, psi)
            mats = annotated_materializations(a, phi, p.phi_l, mode)
            rm = rewritable_materialize(phi, p.phi_l)
            nl_nodes, nl_edges = rm.n_l.node_image(), rm.n_l.edge_image()
            back_n = {w: v for v, w in m_l.node_map.items()}
            back_e = {t: e for e, t in m_l.edge_map.items()}
            an = {v: ([rm.n_l.node_map[back_n[v]]] if v in back_n else
                      [w for w in rm.rmat.nodes if w not in nl_nodes
                       and rm.psi.node_map[w] == psi.node_map[v]]) for v in x.nodes}
            ae = {e: ([rm.n_l.edge_map[back_e[e]]] if e in back_e else
                      [t for t in rm.rmat.edge_ids if t not in nl_edges
                       and rm.psi.edge_map[t] == psi.edge_map[e]]) for e in x.edge_ids}
            ok = False
            for zeta in enumerate_homs(x, rm.rmat, node_allowed=an, edge_allowed=ae):
                for am in mats:
                    target = am.annotated(f)
                    if is_legal_concrete(zeta, target) and is_legal(rm.psi, target, a):
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                return VerificationReport("terminal", False, cases,
                                          {"X": _graph_dict(x),
                                           "match": dict(sorted(m_l.node_map.items()))})
    return VerificationReport("terminal", True, cases)
