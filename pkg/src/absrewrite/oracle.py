"""Bounded brute-force languages and set-equality checks.

Languages are realized as finite sets of canonical keys: graphs up to
isomorphism, and matches ``m: L >-> X`` up to isomorphisms of ``X`` that
commute with ``m``.  Every characterization of a language used by the
rewriting machinery is checked here by computing both sides independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .abstract_rewrite import AnnotatedGraph, legal_instances, member, strongest_post
from .dpo import Production, dpo_step
from .enumeration import (EnumerationBudget, canonical_form, enumerate_graphs, mono_key)
from .graph import Graph, GraphError, GraphMorphism, compose, enumerate_homs, enumerate_monos, is_mono
from .materialization import (RewritableMaterialization, materialize, mono_language_member,
                              rewritable_materialize)

__all__ = [
    "EnumerationBudget", "enumerate_graphs", "LanguageReport", "graph_language",
    "annotated_language", "mono_language", "language", "language_equality_report",
    "assert_language_equality", "matches_factoring", "comatches_factoring", "post_image",
    "check_materialization_language", "check_rewritable_language",
    "check_rewriting_abstract_matches", "check_comatch_language", "check_strongest_post",
]

# a language: canonical key -> one representative (graph or match)
Language = dict


def as_budget(budget: Union[EnumerationBudget, int, tuple], labels: Iterable[str] = ()
              ) -> EnumerationBudget:
    """Normalize ``(nodes, edges)``, a single bound or a budget; ``labels`` extend the alphabet."""
    if isinstance(budget, EnumerationBudget):
        b = budget
    elif isinstance(budget, int):
        b = EnumerationBudget(budget, budget)
    else:
        b = EnumerationBudget(*budget)
    labs = tuple(sorted(set(b.labels) | set(labels)))
    return EnumerationBudget(b.max_nodes, b.max_edges, labs)


def _describe(item) -> dict:
    if isinstance(item, GraphMorphism):
        return {"graph": _graph_dict(item.cod),
                "nodes": dict(sorted(item.node_map.items())),
                "edges": dict(sorted(item.edge_map.items()))}
    return _graph_dict(item)


def _graph_dict(g: Graph) -> dict:
    return {"nodes": list(g.nodes),
            "edges": [[e.id, e.src, e.tgt, e.label] for e in g.edges]}


# -- languages ---------------------------------------------------------------------

def graph_language(a: Graph, budget) -> Language:
    """``{X | X -> A}`` within the budget, by scanning every graph."""
    b = as_budget(budget, a.labels)
    return {canonical_form(x): x for x in enumerate_graphs(b)
            if next(enumerate_homs(x, a), None) is not None}


def annotated_language(a: AnnotatedGraph, budget, *, method: str = "typed") -> Language:
    """``L(A[a1, a2])`` within the budget.

    ``"typed"`` enumerates graphs over ``A`` respecting the multiplicity bounds;
    ``"scan"`` tests every graph of the budget with :func:`member`.
    """
    b = as_budget(budget, a.graph.labels)
    if method == "scan":
        return {canonical_form(x): x for x in enumerate_graphs(b) if member(x, a) is not None}
    if method != "typed":
        raise ValueError(f"unknown method {method!r}")
    out: Language = {}
    for x, _ in legal_instances(a, b):
        out.setdefault(canonical_form(x), x)
    return out


def _monos_into_budget(lhs: Graph, b: EnumerationBudget) -> Iterator[GraphMorphism]:
    seen = set()
    for x in enumerate_graphs(b):
        for m in enumerate_monos(lhs, x):
            k = mono_key(m)
            if k not in seen:
                seen.add(k)
                yield m


def mono_language(phi: GraphMorphism, budget) -> Language:
    """``L(phi)`` within the budget: matches ``m`` with a pullback witness into ``phi``."""
    if not is_mono(phi):
        raise GraphError("non-mono input: languages are defined for monos")
    b = as_budget(budget, phi.cod.labels | phi.dom.labels)
    return {mono_key(m): m for m in _monos_into_budget(phi.dom, b)
            if mono_language_member(phi, m) is not None}


def language(obj, budget) -> Language:
    """Dispatch on graphs, annotated graphs and monos."""
    if isinstance(obj, AnnotatedGraph):
        return annotated_language(obj, budget)
    if isinstance(obj, GraphMorphism):
        return mono_language(obj, budget)
    if isinstance(obj, Graph):
        return graph_language(obj, budget)
    raise TypeError(f"no language for {type(obj).__name__}")


def _factors(phi: GraphMorphism, m: GraphMorphism) -> bool:
    """Is there ``psi: X -> A`` with ``psi . m = phi``?"""
    nodes = {m.node_map[v]: [phi.node_map[v]] for v in m.dom.nodes}
    edges = {m.edge_map[e]: [phi.edge_map[e]] for e in m.dom.edge_ids}
    return next(enumerate_homs(m.cod, phi.cod, node_allowed=nodes, edge_allowed=edges),
                None) is not None


def matches_factoring(phi: GraphMorphism, budget, production: Optional[Production] = None
                      ) -> Language:
    """Matches ``m_L`` with ``phi = psi . m_L`` for some ``psi`` (and rewritable by ``production``)."""
    b = as_budget(budget, phi.cod.labels | phi.dom.labels)
    out: Language = {}
    for m in _monos_into_budget(phi.dom, b):
        if production is not None and dpo_step(production, m) is None:
            continue
        if _factors(phi, m):
            out[mono_key(m)] = m
    return out


def source_budget(p: Production, budget: EnumerationBudget) -> EnumerationBudget:
    """Budget of hosts whose results fit ``budget``: a step changes sizes by a constant."""
    dn = len(p.lhs.nodes) - len(p.rhs.nodes)
    de = len(p.lhs.edges) - len(p.rhs.edges)
    return EnumerationBudget(max(budget.max_nodes + dn, 0), max(budget.max_edges + de, 0),
                             budget.labels)


def _fits(g: Graph, b: EnumerationBudget) -> bool:
    return len(g.nodes) <= b.max_nodes and len(g.edges) <= b.max_edges


def comatches_factoring(phi: GraphMorphism, p: Production, budget) -> Language:
    """Co-matches ``m_R`` of steps ``m_L => m_R`` with ``phi = psi . m_L`` for some ``psi``."""
    b = as_budget(budget, phi.cod.labels | p.rhs.labels)
    out: Language = {}
    for m_l in matches_factoring(phi, source_budget(p, b), p).values():
        trace = dpo_step(p, m_l)
        if _fits(trace.result, b):
            out.setdefault(mono_key(trace.comatch), trace.comatch)
    return out


def comatches_from(n_l: GraphMorphism, p: Production, budget) -> Language:
    """Co-matches of steps from the members of ``L(n_L)``."""
    b = as_budget(budget, n_l.cod.labels | p.rhs.labels)
    out: Language = {}
    for m_l in mono_language(n_l, source_budget(p, b)).values():
        trace = dpo_step(p, m_l)
        if trace is not None and _fits(trace.result, b):
            out.setdefault(mono_key(trace.comatch), trace.comatch)
    return out


def post_image(a: AnnotatedGraph, p: Production, phi: GraphMorphism, budget) -> Language:
    """``{Y | X in L(A), psi . m_L = phi, X => Y}`` within the budget, by forward search."""
    b = as_budget(budget, a.graph.labels | p.rhs.labels)
    out: Language = {}
    for x, psi in legal_instances(a, source_budget(p, b)):
        nodes = {v: [w for w in x.nodes if psi.node_map[w] == phi.node_map[v]]
                 for v in p.lhs.nodes}
        edges = {e: [t for t in x.edge_ids if psi.edge_map[t] == phi.edge_map[e]]
                 for e in p.lhs.edge_ids}
        for m_l in enumerate_monos(p.lhs, x, node_allowed=nodes, edge_allowed=edges):
            trace = dpo_step(p, m_l)
            if trace is not None and _fits(trace.result, b):
                out.setdefault(canonical_form(trace.result), trace.result)
    return out


# -- equality reports --------------------------------------------------------------

@dataclass
class LanguageReport:
    name: str
    passed: bool
    left_size: int
    right_size: int
    only_left: list = field(default_factory=list)
    only_right: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, "left_size": self.left_size,
                "right_size": self.right_size, "only_left": self.only_left,
                "only_right": self.only_right}


def language_equality_report(left: Language, right: Language, name: str = "languages"
                             ) -> LanguageReport:
    only_l = [_describe(left[k]) for k in sorted(set(left) - set(right))]
    only_r = [_describe(right[k]) for k in sorted(set(right) - set(left))]
    return LanguageReport(name, not only_l and not only_r, len(left), len(right), only_l, only_r)


def assert_language_equality(left: Language, right: Language, name: str = "languages"
                             ) -> LanguageReport:
    report = language_equality_report(left, right, name)
    if not report.passed:
        raise AssertionError(f"{name}: {len(report.only_left)} only on the left, "
                             f"{len(report.only_right)} only on the right")
    return report


def check_materialization_language(phi: GraphMorphism, budget) -> LanguageReport:
    """``L(eta_phi)`` against the matches factoring ``phi``."""
    matz = materialize(phi)
    return language_equality_report(mono_language(matz.eta, budget),
                                    matches_factoring(phi, budget), "materialization")


def check_rewritable_language(phi: GraphMorphism, p: Production, budget,
                              rm: Optional[RewritableMaterialization] = None) -> LanguageReport:
    """``L(n_L)`` against the rewritable matches factoring ``phi``."""
    if rm is None:
        rm = rewritable_materialize(phi, p.phi_l)
    return language_equality_report(mono_language(rm.n_l, budget),
                                    matches_factoring(phi, budget, p), "rewritable_materialization")


def check_rewriting_abstract_matches(n_l: GraphMorphism, p: Production, budget) -> LanguageReport:
    """``L(n_R)`` against the co-matches of steps from members of ``L(n_L)``."""
    trace = dpo_step(p, n_l)
    if trace is None:
        raise GraphError("pushout complement does not exist for the abstract match")
    return language_equality_report(mono_language(trace.comatch, budget),
                                    comatches_from(n_l, p, budget), "rewriting_abstract_matches")


def check_comatch_language(phi: GraphMorphism, p: Production, budget) -> LanguageReport:
    """``L(n_R)`` of the rewritten rewritable materialization against concrete co-matches."""
    rm = rewritable_materialize(phi, p.phi_l)
    trace = dpo_step(p, rm.n_l)
    return language_equality_report(mono_language(trace.comatch, budget),
                                    comatches_factoring(phi, p, budget), "comatch_language")


def check_strongest_post(a: AnnotatedGraph, p: Production, phi: GraphMorphism, budget, *,
                         method: str = "auto") -> LanguageReport:
    """Union of the result languages against the brute-force post-image."""
    res = strongest_post(a, p, phi, method=method)
    left: Language = {}
    for bb in res.annotated():
        for k, y in annotated_language(bb, budget).items():
            left.setdefault(k, y)
    return language_equality_report(left, post_image(a, p, phi, budget), "strongest_post")
