from __future__ import annotations

import pytest

from absrewrite.abstract_rewrite import annotate
from absrewrite.annotation import mult_functor
from absrewrite.dpo import Production
from absrewrite.enumeration import EnumerationBudget
from absrewrite.graph import Edge, Graph, GraphError, GraphMorphism, identity, inclusion
from absrewrite.materialization import materialize, rewritable_materialize
from absrewrite.oracle import (annotated_language, as_budget, assert_language_equality,
                               check_comatch_language, check_materialization_language,
                               check_rewritable_language, check_rewriting_abstract_matches,
                               check_strongest_post, graph_language, language,
                               language_equality_report, matches_factoring, mono_language,
                               post_image, source_budget)

from figures import annotated, loop_graph, running

F2 = mult_functor(2)


def test_budget_normalization():
    assert as_budget(3) == EnumerationBudget(3, 3, ("a",))
    assert as_budget((2, 1), ["b"]).labels == ("a", "b")


def test_graph_language_of_loop_is_everything():
    # every graph with one label maps to a single loop
    assert len(graph_language(loop_graph(), (2, 2))) == 13


def test_graph_language_of_single_node():
    assert len(graph_language(Graph(["u"]), (3, 2))) == 4   # discrete graphs with 0..3 nodes


def test_annotated_language_methods_agree():
    a, _, _ = annotated()
    assert set(annotated_language(a, (2, 3))) == set(annotated_language(a, (2, 3), method="scan"))
    with pytest.raises(ValueError):
        annotated_language(a, 2, method="nope")


def test_mono_language_rejects_non_mono():
    _, _, phi = running()
    with pytest.raises(GraphError, match="non-mono"):
        mono_language(phi, 2)


def test_language_dispatch():
    _, _, phi = running()
    assert language(loop_graph(), 1) == graph_language(loop_graph(), 1)
    assert language(materialize(phi).eta, 2) == mono_language(materialize(phi).eta, 2)
    with pytest.raises(TypeError):
        language("graph", 1)


def test_report_lists_differences():
    rep = language_equality_report({1: Graph(["v"])}, {2: Graph()}, "demo")
    assert not rep.passed and rep.only_left == [{"nodes": ["v"], "edges": []}]
    with pytest.raises(AssertionError, match="demo"):
        assert_language_equality({1: Graph()}, {}, "demo")


def test_source_budget():
    _, p, _ = running()
    assert source_budget(p, EnumerationBudget(3, 4)) == EnumerationBudget(3, 4)
    q = p.reversed()
    assert source_budget(q, EnumerationBudget(3, 4)) == EnumerationBudget(3, 4)
    lhs = Graph(["x"])
    drop = Production(inclusion(Graph(), lhs), identity(Graph()))
    assert source_budget(drop, EnumerationBudget(2, 2)) == EnumerationBudget(3, 2)


class TestRunningExample:
    budget = (3, 4)

    def test_materialization(self):
        _, _, phi = running()
        rep = check_materialization_language(phi, self.budget)
        assert rep.passed and rep.left_size == 255

    def test_rewritable(self):
        _, p, phi = running()
        rep = check_rewritable_language(phi, p, self.budget)
        assert rep.passed and rep.left_size == 39

    def test_rewriting_abstract_matches(self):
        _, p, phi = running()
        rm = rewritable_materialize(phi, p.phi_l)
        rep = check_rewriting_abstract_matches(rm.n_l, p, self.budget)
        assert rep.passed and rep.left_size == 39

    def test_comatches(self):
        _, p, phi = running()
        rep = check_comatch_language(phi, p, self.budget)
        assert rep.passed and rep.left_size == 39

    def test_strongest_post(self):
        _, p, phi = running()
        rep = check_strongest_post(annotate(phi.cod, F2), p, phi, self.budget)
        assert rep.passed and rep.left_size == 39


def test_annotated_post():
    a, p, phi = annotated()
    rep = check_strongest_post(a, p, phi, (3, 6))
    assert rep.passed and rep.left_size == 75


def test_plain_materialization_is_not_rewritable():
    # L(eta) holds matches that cannot be rewritten, so the rewritable language is strictly smaller
    _, p, phi = running()
    full = matches_factoring(phi, (3, 3))
    rewritable = matches_factoring(phi, (3, 3), p)
    assert set(rewritable) < set(full)


def test_post_image_respects_budget():
    _, p, phi = running()
    for y in post_image(annotate(phi.cod, F2), p, phi, (2, 2)).values():
        assert len(y.nodes) <= 2 and len(y.edges) <= 2
