from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from absrewrite.annotation import (PROPERTIES, STAR, CapabilityAbsent, CountingMonoid, ItemMap,
                                   PathSet, check_functor_laws, check_property, format_value,
                                   functor_by_name, mult_functor, outdeg_functor, parse_value,
                                   path_functor, path_plus, transitive_closure)
from absrewrite.enumeration import EnumerationBudget, enumerate_graphs
from absrewrite.graph import Edge, Graph, GraphError, GraphMorphism, identity, inclusion

from strategies import graphs, homs


def monoid_laws(m, triples=True):
    xs = list(m.elements())
    z = m.zero
    for a in xs:
        assert m.plus(a, z) == a == m.plus(z, a)
        assert m.leq(z, a)
        assert m.leq(a, a)
    for a, b in itertools.product(xs, repeat=2):
        assert m.plus(a, b) == m.plus(b, a)
        if m.leq(a, b) and m.leq(b, a):
            assert a == b
    if triples:
        for a, b, c in itertools.product(xs, repeat=3):
            assert m.plus(m.plus(a, b), c) == m.plus(a, m.plus(b, c))
            if m.leq(a, b):
                assert m.leq(m.plus(a, c), m.plus(b, c))
            if m.leq(a, b) and m.leq(b, c):
                assert m.leq(a, c)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counting_monoid_laws(n):
    m = CountingMonoid(n)
    monoid_laws(m)
    assert list(m.elements()) == list(range(n + 1)) + [STAR]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counting_subtraction_well_behaved(n):
    m = CountingMonoid(n)
    assert m.well_behaved
    for a in m.elements():
        assert m.minus(a, a) == 0
        for b in m.elements():
            if m.leq(b, a):
                assert m.plus(m.minus(a, b), b) == a


def test_counting_examples():
    m2 = CountingMonoid(2)
    assert m2.plus(1, 2) == STAR
    assert m2.minus(1, 2) == 0
    assert m2.minus(STAR, 1) == STAR
    assert m2.minus(STAR, STAR) == 0


def test_parenthesization_matters():
    m3 = CountingMonoid(3)
    assert m3.plus(2, m3.minus(2, 1)) == 3
    assert m3.minus(m3.plus(2, 2), 1) == STAR


def test_counting_needs_positive_n():
    with pytest.raises(ValueError):
        CountingMonoid(0)


def test_value_parsing():
    assert parse_value("*", 2) == STAR
    assert parse_value(2, 2) == 2
    assert format_value(STAR) == "*"
    for bad in (3, -1, "2", True, 1.5):
        with pytest.raises(ValueError):
            parse_value(bad, 2)


class TestPointwise:
    def test_laws_small_graph(self):
        g = Graph(["v"], [Edge("l", "v", "v", "a")])
        monoid_laws(mult_functor(1).monoid(g))

    def test_host_mismatch(self):
        f = mult_functor(2)
        g, h = Graph(["v"]), Graph(["w"])
        with pytest.raises(GraphError):
            f.plus(g, f.zero(g), f.zero(h))


def chain(n: int) -> Graph:
    nodes = [str(i) for i in range(1, n + 1)]
    return Graph(nodes, [Edge(f"e{i}", nodes[i], nodes[i + 1], "a") for i in range(n - 1)])


class TestPathMonoid:
    def test_alternating_fragments(self):
        g = chain(3)
        p0 = PathSet(g, frozenset({("1", "2")}))
        p1 = PathSet(g, frozenset({("2", "3")}))
        assert path_plus(p0, p1).pairs == {("1", "2"), ("2", "3"), ("1", "3")}

    def test_same_set_fragments_do_not_chain(self):
        g = chain(3)
        p = PathSet(g, frozenset({("1", "2"), ("2", "3")}))
        zero = PathSet(g, frozenset())
        assert path_plus(p, zero) == p

    def test_closure_enforced(self):
        with pytest.raises(GraphError, match="transitive closure"):
            PathSet(chain(2), frozenset({("2", "1")}))

    def test_minus_returns_first(self):
        m = path_functor().monoid(chain(3))
        xs = list(m.elements())
        assert all(m.minus(a, b) == a for a in xs for b in xs)

    def test_laws_exhaustive(self):
        for g in enumerate_graphs(EnumerationBudget(3, 3)):
            m = path_functor().monoid(g)
            monoid_laws(m, triples=m.size() <= 16)

    @given(graphs(3, 3), st.data())
    def test_associativity_sampled(self, g, data):
        pts = sorted(transitive_closure(g))
        sets = [PathSet(g, frozenset(data.draw(st.sets(st.sampled_from(pts)) if pts else st.just(set()))))
                for _ in range(3)]
        a, b, c = sets
        assert path_plus(path_plus(a, b), c) == path_plus(a, path_plus(b, c))

    def test_standard_and_collapse(self):
        t = path_functor()
        assert t.standard(chain(3)).pairs == {("1", "2"), ("2", "3"), ("1", "3")}
        cyc = Graph(["1", "2"], [Edge("a", "1", "2", "a"), Edge("b", "2", "1", "a")])
        loop = Graph(["u"], [Edge("l", "u", "u", "a")])
        phi = GraphMorphism(cyc, loop, {"1": "u", "2": "u"}, {"a": "l", "b": "l"})
        assert t.standard(cyc).pairs == {("1", "2"), ("2", "1"), ("1", "1"), ("2", "2")}
        assert t.apply(phi, t.standard(cyc)).pairs == {("u", "u")}


class TestFunctors:
    def test_mult_sums_preimages(self):
        f = mult_functor(2)
        src, tgt = Graph(["p", "q"]), Graph(["u"])
        phi = GraphMorphism(src, tgt, {"p": "u", "q": "u"}, {})
        assert f.apply(phi, f.standard(src)).node("u") == 2
        assert mult_functor(1).apply(phi, mult_functor(1).standard(src)).node("u") == STAR

    def test_mult_red_reindexes(self):
        f = mult_functor(2)
        g = Graph(["v", "w"], [Edge("e", "v", "w", "a")])
        sub = Graph(["v"])
        b = f.of(g, {"v": 2, "w": 1}, {"e": "*"})
        assert f.red(inclusion(sub, g), b) == f.of(sub, {"v": 2})
        assert f.leq(g, f.apply(inclusion(sub, g), f.red(inclusion(sub, g), b)), b)

    def test_outdeg(self):
        s3 = outdeg_functor(3)
        src, tgt = Graph(["p", "q"]), Graph(["u"])
        phi = GraphMorphism(src, tgt, {"p": "u", "q": "u"}, {})
        assert s3.apply(phi, s3.of(src, {"p": 1, "q": 2})).node("u") == 2
        star = Graph(["c", "l1", "l2"], [Edge("1", "c", "l1", "a"), Edge("2", "c", "l2", "a")])
        assert s3.standard(star).node("c") == 2
        assert outdeg_functor(1).standard(star).node("c") == STAR

    def test_red_capability(self):
        g = Graph(["v"])
        for f in (outdeg_functor(2), path_functor()):
            assert not f.has_red
            with pytest.raises(CapabilityAbsent):
                f.red(identity(g), f.zero(g))

    def test_by_name(self):
        assert functor_by_name("mult", 3).n == 3
        with pytest.raises(ValueError):
            functor_by_name("nope")


@pytest.mark.parametrize("name", ["mult", "outdeg", "path"])
def test_functor_laws_small(name):
    rep = check_functor_laws(functor_by_name(name, 2), 2, max_edges=2)
    assert rep.passed and rep.cases > 0


@given(st.data())
def test_functor_composition_random(data):
    f = mult_functor(2)
    x = data.draw(graphs(3, 3))
    y = data.draw(graphs(3, 3))
    z = data.draw(graphs(2, 3))
    g1 = data.draw(homs(x, y))
    g2 = data.draw(homs(y, z))
    if g1 is None or g2 is None:
        return
    from absrewrite.graph import compose
    vals = data.draw(st.lists(st.sampled_from([0, 1, 2, "*"]), min_size=len(x.nodes) + len(x.edges),
                              max_size=len(x.nodes) + len(x.edges)))
    a = f.of(x, dict(zip(x.nodes, vals)), dict(zip(x.edge_ids, vals[len(x.nodes):])))
    assert f.apply(compose(g1, g2), a) == f.apply(g2, f.apply(g1, a))


class TestBattery:
    @pytest.mark.parametrize("which", ["homomorphism", "adjunction", "pushout", "pushout_standard",
                                       "isomorphism"])
    def test_mult_bound_two(self, which):
        assert check_property(mult_functor(2), which, 2).passed

    def test_beck_chevalley_bound_two(self):
        assert check_property(mult_functor(2), "beck_chevalley", 2).passed

    @pytest.mark.parametrize("name", ["outdeg", "path"])
    def test_local_functors(self, name):
        f = functor_by_name(name, 2)
        assert check_property(f, "homomorphism", 2).passed
        assert check_property(f, "pushout_standard", 2).passed
        reports = [check_property(f, w, 2) for w in PROPERTIES]
        failing = [r for r in reports if not r.passed]
        assert failing
        for r in failing:
            d = r.to_dict()
            assert d["capability_absent"] or d["counterexample"]

    def test_isomorphism_counterexample_for_outdeg(self):
        r = check_property(outdeg_functor(2), "isomorphism", 2)
        assert not r.passed and not r.capability_absent
        m = r.counterexample["morphism"]
        assert m["from"]["nodes"] == [] and len(m["to"]["nodes"]) == 1

    def test_unknown_property(self):
        with pytest.raises(ValueError):
            check_property(mult_functor(2), "nope")

    def test_report_is_json_ready(self):
        import json
        r = check_property(path_functor(), "adjunction", 2)
        assert json.loads(json.dumps(r.to_dict()))["capability_absent"] is True
