from __future__ import annotations

import itertools

from hypothesis import given

from absrewrite.enumeration import (EnumerationBudget, canonical_form, enumerate_graphs,
                                    enumerate_over, graphs_over, terminal)
from absrewrite.graph import Edge, Graph, find_iso, is_isomorphic

from strategies import graphs


def brute_classes(max_nodes: int, max_edges: int, labels=("a",)) -> int:
    """Isomorphism classes by pairwise find_iso over all edge multisets."""
    reps: list[Graph] = []
    for n in range(max_nodes + 1):
        nodes = [f"n{i}" for i in range(n)]
        slots = [(s, t, lab) for s in nodes for t in nodes for lab in labels]
        for k in range(max_edges + 1):
            for combo in itertools.combinations_with_replacement(slots, k):
                g = Graph(nodes, [Edge(f"e{i}", *c) for i, c in enumerate(combo)])
                if not any(is_isomorphic(g, r) for r in reps):
                    reps.append(g)
    return len(reps)


def test_small_counts():
    assert len(enumerate_graphs(EnumerationBudget(1, 0))) == 2
    assert len(enumerate_graphs(EnumerationBudget(1, 1))) == 3
    assert len(enumerate_graphs(EnumerationBudget(2, 1))) == 6


def test_counts_against_brute_force():
    for n, e in [(2, 2), (3, 1), (3, 2)]:
        assert len(enumerate_graphs(EnumerationBudget(n, e))) == brute_classes(n, e)
    assert len(enumerate_graphs(EnumerationBudget(2, 1, ("a", "b")))) == brute_classes(2, 1, ("a", "b"))


def test_no_duplicates_up_to_iso():
    gs = enumerate_graphs(EnumerationBudget(3, 2))
    for g, h in itertools.combinations(gs, 2):
        assert not is_isomorphic(g, h)


def test_deterministic():
    b = EnumerationBudget(2, 2)
    assert enumerate_graphs(b) == enumerate_graphs(b)


def test_terminal():
    one = terminal(["b", "a"])
    assert one.size() == (1, 2)


def test_over_shape_respects_caps():
    shape = Graph(["u"], [Edge("a", "u", "u", "a")])
    for x, xi in enumerate_over(shape, 3, 3, node_caps={"u": 2}, edge_mins={"a": 1}):
        assert len(x.nodes) <= 2 and len(x.edges) >= 1
        xi.validate()


def test_over_shape_covers_all_graphs():
    # over the terminal graph every graph appears
    shape = terminal(["a"])
    got = {canonical_form(g) for g in graphs_over(shape, 2, 2)}
    assert got == {canonical_form(g) for g in enumerate_graphs(EnumerationBudget(2, 2))}


@given(graphs(4, 4, labels=("a", "b")))
def test_canonical_form_is_invariant(g):
    ren = Graph([v + "x" for v in reversed(g.nodes)],
                [Edge("z" + e.id, e.src + "x", e.tgt + "x", e.label) for e in g.edges])
    assert canonical_form(g) == canonical_form(ren)


@given(graphs(3, 3), graphs(3, 3))
def test_canonical_form_decides_iso(g, h):
    assert (canonical_form(g) == canonical_form(h)) == (find_iso(g, h) is not None)
