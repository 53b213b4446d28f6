"""Materialization and rewritable materialization of a left-hand side.

Given ``phi: L -> A`` (not necessarily mono), the materialization
``L >-> <phi> -> A`` is the terminal factorization of ``phi`` whose first
factor is a mono and whose square with ``id_L`` is a pullback.  In graphs it
has a direct description: keep ``L``, add a fresh node ``bot:u`` for every
node ``u`` of ``A``, and for every edge ``a`` of ``A`` add one optional edge
``opt:x,y,a`` for each admissible choice of endpoints ``x`` (a preimage of
``src(a)`` in ``L`` or ``bot:src(a)``) and ``y`` (likewise for the target).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .classifiers import characteristic, fpbc_mono, omega
from .enumeration import EnumerationBudget, enumerate_over, terminal
from .graph import (Edge, Graph, GraphError, GraphMorphism, compose, enumerate_homs,
                    enumerate_monos, identity, inclusion, is_mono)
from .limits import pair, product, pushout

BOT_PREFIX = "bot:"
OPT_PREFIX = "opt:"


def bot(u: str) -> str:
    return f"{BOT_PREFIX}{u}"


def opt(x: str, y: str, a: str) -> str:
    return f"{OPT_PREFIX}{x},{y},{a}"


@dataclass(frozen=True)
class Materialization:
    phi: GraphMorphism     # L -> A
    mat: Graph             # <phi>
    eta: GraphMorphism     # L >-> <phi>
    psi: GraphMorphism     # <phi> -> A


@dataclass(frozen=True)
class RewritableMaterialization:
    materialization: Materialization
    phi_l: GraphMorphism          # I >-> L
    f_graph: Graph                # F
    gamma: GraphMorphism          # I >-> F
    beta: GraphMorphism           # F >-> <phi>
    rmat: Graph                   # <phi, phi_L>
    n_l: GraphMorphism            # L >-> <phi, phi_L>
    f_to_rmat: GraphMorphism      # F >-> <phi, phi_L>
    alpha: GraphMorphism          # <phi, phi_L> -> <phi>
    psi: GraphMorphism            # psi . alpha : <phi, phi_L> -> A

    @property
    def phi(self) -> GraphMorphism:
        return self.materialization.phi


def materialize(phi: GraphMorphism) -> Materialization:
    lhs, a = phi.dom, phi.cod
    for v in lhs.nodes:
        if v.startswith(BOT_PREFIX):
            raise GraphError(f"left-hand side node id {v!r} clashes with materialization names")
    for e in lhs.edge_ids:
        if e.startswith(OPT_PREFIX):
            raise GraphError(f"left-hand side edge id {e!r} clashes with materialization names")
    pre: dict[str, list[str]] = {u: [] for u in a.nodes}
    for v in lhs.nodes:
        pre[phi.node_map[v]].append(v)
    nodes = list(lhs.nodes) + [bot(u) for u in a.nodes]
    edges = list(lhs.edges)
    psi_n = {v: phi.node_map[v] for v in lhs.nodes}
    psi_n.update({bot(u): u for u in a.nodes})
    psi_e = {e: phi.edge_map[e] for e in lhs.edge_ids}
    for ae in a.edges:
        for x in pre[ae.src] + [bot(ae.src)]:
            for y in pre[ae.tgt] + [bot(ae.tgt)]:
                eid = opt(x, y, ae.id)
                edges.append(Edge(eid, x, y, ae.label))
                psi_e[eid] = ae.id
    mat = Graph(nodes, edges)
    eta = inclusion(lhs, mat)
    psi = GraphMorphism(mat, a, psi_n, psi_e, check=False)
    return Materialization(phi, mat, eta, psi)


def is_optional(item: str) -> bool:
    """True for materialization items outside the image of ``eta``."""
    return item.startswith(BOT_PREFIX) or item.startswith(OPT_PREFIX)


def materialization_square(matz: Materialization, labels: Optional[Iterable[str]] = None):
    """The square ``L -phi-> A -true_A-> A x Omega`` over ``L -eta-> <phi> -chi-> A x Omega``.

    Returns ``(phi, true_A, eta, chi)``; the materialization is correct iff
    ``(eta, chi)`` is a final pullback complement of ``(phi, true_A)``.
    """
    a = matz.phi.cod
    labs = set(labels or ()) | a.labels | matz.phi.dom.labels
    if not labs:
        labs = {"a"}
    om = omega(labs)
    one = terminal(om.labels)
    prod = product(a, om.graph, one)
    bang = GraphMorphism(a, one, {v: "1" for v in a.nodes},
                         {e.id: f"1:{e.label}" for e in a.edges})
    true_a = pair(identity(a), compose(bang, om.true), prod)
    chi = pair(matz.psi, characteristic(matz.eta, om), prod)
    return matz.phi, true_a, matz.eta, chi


def _mediators(matz: Materialization, m: GraphMorphism, xi: GraphMorphism):
    """Arrows ``f: X -> <phi>`` with ``psi . f = xi``, ``f . m = eta`` and a pullback square."""
    mat, eta, psi = matz.mat, matz.eta, matz.psi
    back_n = {w: v for v, w in m.node_map.items()}
    back_e = {w: e for e, w in m.edge_map.items()}
    eta_n, eta_e = eta.node_image(), eta.edge_image()
    an = {}
    for v in m.cod.nodes:
        if v in back_n:
            an[v] = [eta.node_map[back_n[v]]]
        else:
            an[v] = [w for w in mat.nodes if psi.node_map[w] == xi.node_map[v] and w not in eta_n]
    ae = {}
    for e in m.cod.edge_ids:
        if e in back_e:
            ae[e] = [eta.edge_map[back_e[e]]]
        else:
            ae[e] = [t for t in mat.edge_ids if psi.edge_map[t] == xi.edge_map[e] and t not in eta_e]
    return enumerate_homs(m.cod, mat, node_allowed=an, edge_allowed=ae)


def materialization_violation(matz: Materialization, bound: int = 3) -> Optional[dict]:
    """First factorization of ``phi`` (within ``bound``) without a unique mediator."""
    phi = matz.phi
    for x, xi in enumerate_over(phi.cod, bound, bound):
        allowed = {v: [w for w in x.nodes if xi.node_map[w] == phi.node_map[v]]
                   for v in phi.dom.nodes}
        allowed_e = {e: [t for t in x.edge_ids if xi.edge_map[t] == phi.edge_map[e]]
                     for e in phi.dom.edge_ids}
        for m in enumerate_monos(phi.dom, x, node_allowed=allowed, edge_allowed=allowed_e):
            count = 0
            for _ in _mediators(matz, m, xi):
                count += 1
                if count > 1:
                    break
            if count != 1:
                return {"graph": x, "mono": m, "map": xi, "mediators": count}
    return None


def materialization_terminal(matz: Materialization, bound: int = 3) -> bool:
    return materialization_violation(matz, bound) is None


def mono_language_member(phi: GraphMorphism, m: GraphMorphism) -> Optional[GraphMorphism]:
    """A witness ``psi: X -> A`` for ``m`` in the language of the mono ``phi``."""
    if not (is_mono(phi) and is_mono(m)):
        raise GraphError("non-mono input: languages are defined for monos")
    if phi.dom != m.dom:
        raise GraphError("object mismatch: phi and m have different domains")
    a = phi.cod
    back_n = {w: v for v, w in m.node_map.items()}
    back_e = {w: e for e, w in m.edge_map.items()}
    img_n, img_e = phi.node_image(), phi.edge_image()
    outside_n = [u for u in a.nodes if u not in img_n]
    outside_e = [t for t in a.edge_ids if t not in img_e]
    an = {v: [phi.node_map[back_n[v]]] if v in back_n else outside_n for v in m.cod.nodes}
    ae = {e: [phi.edge_map[back_e[e]]] if e in back_e else outside_e for e in m.cod.edge_ids}
    return next(enumerate_homs(m.cod, a, node_allowed=an, edge_allowed=ae), None)


def rewritable_materialize(phi: GraphMorphism, phi_l: GraphMorphism) -> RewritableMaterialization:
    if not is_mono(phi_l):
        raise GraphError("non-mono input: phi_L must be a mono")
    if phi_l.cod != phi.dom:
        raise GraphError("object mismatch: phi_L does not land in the domain of phi")
    matz = materialize(phi)
    gamma, beta = fpbc_mono(phi_l, matz.eta)
    po = pushout(phi_l, gamma)
    rmat, n_l, f_to_rmat = po.apex, po.left, po.right
    nm: dict[str, str] = {}
    em: dict[str, str] = {}
    for v, w in n_l.node_map.items():
        nm[w] = matz.eta.node_map[v]
    for e, t in n_l.edge_map.items():
        em[t] = matz.eta.edge_map[e]
    for v, w in f_to_rmat.node_map.items():
        nm[w] = beta.node_map[v]
    for e, t in f_to_rmat.edge_map.items():
        em[t] = beta.edge_map[e]
    alpha = GraphMorphism(rmat, matz.mat, nm, em)
    return RewritableMaterialization(matz, phi_l, gamma.cod, gamma, beta, rmat, n_l, f_to_rmat,
                                     alpha, compose(alpha, matz.psi))


def rmat_language_check(rm: RewritableMaterialization, p, budget: EnumerationBudget | int):
    """Bounded check of the match language of ``n_L`` against its characterization.

    Left: matches in the language of ``n_L``.  Right: matches ``m_L`` with
    ``phi = psi . m_L`` for some ``psi`` that admit a rewriting step with ``p``.
    """
    from .oracle import check_rewritable_language

    if p.phi_l != rm.phi_l:
        raise GraphError("production does not use the left leg of the materialization")
    return check_rewritable_language(rm.phi, p, budget, rm=rm)
