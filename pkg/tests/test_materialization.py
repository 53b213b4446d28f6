from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from absrewrite.classifiers import is_fpbc
from absrewrite.dpo import Production, dpo_step
from absrewrite.graph import (Edge, Graph, GraphError, GraphMorphism, compose, find_iso, identity,
                              inclusion)
from absrewrite.limits import gluing_ok
from absrewrite.materialization import (Materialization, bot, is_optional, materialization_square,
                                        materialization_terminal, materialization_violation,
                                        materialize, mono_language_member, opt,
                                        rewritable_materialize, rmat_language_check)
from absrewrite.oracle import check_materialization_language

from figures import expected_f, expected_rmat, loop_graph, running
from strategies import graphs, homs


class TestMaterialize:
    def test_running_example(self):
        _, _, phi = running()
        m = materialize(phi)
        assert set(m.mat.nodes) == {"x", "y", bot("u")}
        assert m.mat.size() == (3, 10)
        assert len(m.eta.edge_image()) == 1
        assert len([e for e in m.mat.edges if is_optional(e.id)]) == 9
        assert compose(m.eta, m.psi) == phi

    def test_empty_lhs(self):
        a = Graph(["u", "w"], [Edge("a", "u", "w", "a"), Edge("b", "w", "w", "a")])
        m = materialize(GraphMorphism(Graph(), a, {}, {}))
        assert set(m.mat.nodes) == {bot("u"), bot("w")}
        assert {e.id for e in m.mat.edges} == {opt(bot("u"), bot("w"), "a"), opt(bot("w"), bot("w"), "b")}

    def test_identity_on_loop(self):
        a = loop_graph()
        m = materialize(identity(a))
        assert m.mat.size() == (2, 5)
        assert materialization_terminal(m, 3)

    def test_name_clash(self):
        a = Graph(["u"])
        with pytest.raises(GraphError, match="clashes"):
            materialize(GraphMorphism(Graph([bot("q")]), a, {bot("q"): "u"}, {}))


class TestTerminality:
    def test_running_example(self):
        _, _, phi = running()
        assert materialization_terminal(materialize(phi), 3)

    def test_missing_pair_edge_detected(self):
        _, _, phi = running()
        m = materialize(phi)
        gone = opt("x", bot("u"), "a")
        mat = m.mat.subgraph(m.mat.nodes, [e for e in m.mat.edge_ids if e != gone])
        psi = GraphMorphism(mat, m.psi.cod, m.psi.node_map,
                            {e: t for e, t in m.psi.edge_map.items() if e != gone})
        broken = Materialization(phi, mat, inclusion(phi.dom, mat), psi)
        v = materialization_violation(broken, 3)
        assert v is not None and v["mediators"] == 0

    def test_lhs_itself_factors_through_eta(self):
        _, _, phi = running()
        m = materialize(phi)
        from absrewrite.materialization import _mediators
        med = list(_mediators(m, identity(phi.dom), phi))
        assert med == [m.eta]


class TestMonoLanguage:
    def test_identity(self):
        a = Graph(["u", "w"], [Edge("a", "u", "w", "a")])
        lhs = Graph(["u"])
        phi = inclusion(lhs, a)
        assert mono_language_member(phi, identity(lhs)) is not None

    def test_extra_preimage_rejected(self):
        a = Graph(["u", "w"], [Edge("a", "u", "w", "a")])
        lhs = Graph(["u"])
        x = Graph(["u", "u2"])
        # u2 may go to w in a; in a2 its loop forces it onto u, breaking the pullback
        a2 = Graph(["u"], [Edge("l", "u", "u", "a")])
        x2 = Graph(["u", "u2"], [Edge("k", "u2", "u2", "a")])
        assert mono_language_member(inclusion(lhs, a2), inclusion(lhs, x2)) is None
        assert mono_language_member(inclusion(lhs, a), inclusion(lhs, x)) is not None

    def test_non_mono(self):
        _, _, phi = running()
        with pytest.raises(GraphError, match="non-mono"):
            mono_language_member(phi, identity(phi.dom))


class TestRewritable:
    def test_running_example(self):
        _, p, phi = running()
        rm = rewritable_materialize(phi, p.phi_l)
        assert rm.f_graph.size() == (2, 4)
        assert rm.rmat.size() == (3, 5)
        assert find_iso(rm.f_graph, expected_f()) is not None
        assert find_iso(rm.rmat, expected_rmat()) is not None
        assert compose(rm.n_l, rm.psi) == phi
        assert gluing_ok(p.phi_l, rm.n_l)

    def test_identity_leg(self):
        _, _, phi = running()
        rm = rewritable_materialize(phi, identity(phi.dom))
        assert find_iso(rm.f_graph, rm.materialization.mat) is not None
        assert find_iso(rm.rmat, rm.materialization.mat) is not None

    def test_empty_interface(self):
        _, _, phi = running()
        rm = rewritable_materialize(phi, inclusion(Graph(), phi.dom))
        assert rm.f_graph.size() == (1, 1)
        assert rm.rmat.size() == (3, 2)
        p = Production(inclusion(Graph(), phi.dom), identity(Graph()))
        assert rmat_language_check(rm, p, (3, 3)).passed

    def test_language_running(self):
        _, p, phi = running()
        rm = rewritable_materialize(phi, p.phi_l)
        rep = rmat_language_check(rm, p, 3)
        assert rep.passed and rep.left_size > 0

    def test_non_applicable_rule_shrinks_both_sides(self):
        # x carries an extra edge not in L; deleting x needs it gone
        a = Graph(["u"], [Edge("a", "u", "u", "a")])
        lhs = Graph(["x"])
        phi = GraphMorphism(lhs, a, {"x": "u"}, {})
        p = Production(inclusion(Graph(), lhs), identity(Graph()))
        rm = rewritable_materialize(phi, p.phi_l)
        rep = rmat_language_check(rm, p, 3)
        assert rep.passed
        full = check_materialization_language(phi, 3)
        assert rep.left_size < full.left_size

    def test_empty_abstract_graph(self):
        lhs = Graph()
        phi = GraphMorphism(lhs, Graph(), {}, {})
        p = Production(identity(lhs), identity(lhs))
        rm = rewritable_materialize(phi, p.phi_l)
        rep = rmat_language_check(rm, p, 3)
        assert rep.passed and rep.left_size == 1   # only the empty host

    def test_mismatched_rule(self):
        _, p, phi = running()
        rm = rewritable_materialize(phi, p.phi_l)
        other = Production(identity(phi.dom), identity(phi.dom))
        with pytest.raises(GraphError, match="left leg"):
            rmat_language_check(rm, other, 2)

    def test_leg_must_be_mono(self):
        _, _, phi = running()
        with pytest.raises(GraphError, match="non-mono"):
            rewritable_materialize(phi, phi)


def test_materialization_square_is_fpbc():
    _, _, phi = running()
    phi_, true_a, eta, chi = materialization_square(materialize(phi))
    assert is_fpbc(phi_, true_a, eta, chi, 4)


@settings(max_examples=25)
@given(st.data())
def test_random_materializations(data):
    a = data.draw(graphs(2, 2, min_nodes=1))
    lhs = data.draw(graphs(2, 1))
    phi = data.draw(homs(lhs, a))
    if phi is None:
        return
    m = materialize(phi)
    assert compose(m.eta, m.psi) == phi
    assert materialization_terminal(m, 2)
    assert check_materialization_language(phi, (2, 2)).passed
