"""Productions and double-pushout rewriting steps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import Graph, GraphError, GraphMorphism, compose, enumerate_monos, is_mono
from .limits import pushout, pushout_complement


@dataclass(frozen=True)
class Production:
    """A span of monos ``L <-phi_l- I -phi_r-> R``."""
    phi_l: GraphMorphism
    phi_r: GraphMorphism
    name: str = "p"

    def __post_init__(self):
        if self.phi_l.dom != self.phi_r.dom:
            raise GraphError("production legs must share the interface I")
        if not (is_mono(self.phi_l) and is_mono(self.phi_r)):
            raise GraphError("production legs must be monos")

    @property
    def lhs(self) -> Graph:
        return self.phi_l.cod

    @property
    def interface(self) -> Graph:
        return self.phi_l.dom

    @property
    def rhs(self) -> Graph:
        return self.phi_r.cod

    def reversed(self) -> "Production":
        return Production(self.phi_r, self.phi_l, name=f"{self.name}^-1")


@dataclass(frozen=True)
class DpoTrace:
    """The full diagram ``L <- I -> R`` over ``X <- C -> Y`` of one rewriting step."""
    production: Production
    match: GraphMorphism          # m_L: L >-> X
    context: Graph                # C
    interface_to_context: GraphMorphism   # I -> C
    context_to_host: GraphMorphism        # C >-> X
    context_to_result: GraphMorphism      # C >-> Y
    comatch: GraphMorphism        # m_R: R >-> Y

    @property
    def host(self) -> Graph:
        return self.match.cod

    @property
    def result(self) -> Graph:
        return self.comatch.cod


def find_matches(p: Production, x: Graph) -> list[GraphMorphism]:
    return list(enumerate_monos(p.lhs, x))


def dpo_step(p: Production, m: GraphMorphism) -> Optional[DpoTrace]:
    """Rewrite ``m.cod`` with ``p`` at ``m``; ``None`` when the gluing condition fails."""
    if m.dom != p.lhs:
        raise GraphError("ill-typed match: domain is not the left-hand side")
    if not is_mono(m):
        raise GraphError("ill-typed match: matches must be monos")
    pc = pushout_complement(p.phi_l, m)
    if pc is None:
        return None
    c, i_to_c, c_to_x = pc
    po = pushout(i_to_c, p.phi_r)
    return DpoTrace(p, m, c, i_to_c, c_to_x, po.left, po.right)


def applicable(p: Production, m: GraphMorphism) -> bool:
    return pushout_complement(p.phi_l, m) is not None


def reverse_step(trace: DpoTrace) -> Optional[DpoTrace]:
    """Apply the reversed production at the co-match of ``trace``."""
    return dpo_step(trace.production.reversed(), trace.comatch)


def trace_arrows(trace: DpoTrace) -> list[GraphMorphism]:
    """All arrows of the diagram, for mono assertions."""
    p = trace.production
    return [p.phi_l, p.phi_r, trace.match, trace.comatch, trace.interface_to_context,
            trace.context_to_host, trace.context_to_result]


def squares_commute(trace: DpoTrace) -> bool:
    p = trace.production
    left = compose(p.phi_l, trace.match) == compose(trace.interface_to_context, trace.context_to_host)
    right = compose(p.phi_r, trace.comatch) == compose(trace.interface_to_context,
                                                       trace.context_to_result)
    return left and right
