"""One test per acceptance criterion; a verdict line per criterion is printed after the run."""

from __future__ import annotations

import itertools
import random
import time

from absrewrite.abstract_rewrite import (HOOK, MODES, SQUIGGLE, annotate, decrement_upper,
                                         strongest_post, verify_completeness, verify_soundness)
from absrewrite.annotation import (CountingMonoid, STAR, check_functor_laws, check_property,
                                   functor_by_name, mult_functor)
from absrewrite.classifiers import fpbc_mono, is_fpbc
from absrewrite.cli import VIOLATED
from absrewrite.dpo import dpo_step
from absrewrite.enumeration import EnumerationBudget, enumerate_graphs, subgraphs
from absrewrite.graph import find_iso, inclusion
from absrewrite.limits import pushout_complement
from absrewrite.materialization import (materialization_square, materialization_terminal,
                                        materialize, rewritable_materialize)
from absrewrite.oracle import (check_comatch_language, check_materialization_language,
                               check_rewritable_language, check_rewriting_abstract_matches,
                               check_strongest_post)

from figures import (annotated, annotated_iso, expected_annotated_result, expected_f,
                     expected_result, expected_rmat, random_triple, running)
from golden_cases import run

F2 = mult_functor(2)
BUDGET = EnumerationBudget(3, 4)


def criterion(key: str, title: str):
    def mark(fn):
        fn.criterion = (key, title)
        return fn
    return mark


@criterion("AC-1", "materialization figure: 3 nodes, 10 edges, 1 in eta; terminal at bound 3; < 1 s")
def test_ac1_materialization_figure():
    t0 = time.perf_counter()
    _, _, phi = running()
    m = materialize(phi)
    assert m.mat.size() == (3, 10)
    assert len(m.eta.edge_image()) == 1
    assert materialization_terminal(m, 3)
    assert time.perf_counter() - t0 < 1.0


@criterion("AC-2", "gluing fails on the plain materialization; dpo-step exits 1")
def test_ac2_gluing_failure():
    _, p, phi = running()
    assert pushout_complement(p.phi_l, materialize(phi).eta) is None
    code, out = run(["dpo-step", "running.json", "--rule", "p", "--match", "eta"])
    assert code == VIOLATED == 1
    assert out["reason"] == "pushout complement does not exist"


@criterion("AC-3", "rewritable materialization figures: F 2/4, rmat 3/5, B 3/5, iso-matched; < 1 s")
def test_ac3_rewritable_figures():
    t0 = time.perf_counter()
    _, p, phi = running()
    rm = rewritable_materialize(phi, p.phi_l)
    b = dpo_step(p, rm.n_l).result
    assert rm.f_graph.size() == (2, 4) and find_iso(rm.f_graph, expected_f()) is not None
    assert rm.rmat.size() == (3, 5) and find_iso(rm.rmat, expected_rmat()) is not None
    assert b.size() == (3, 5) and find_iso(b, expected_result()) is not None
    assert time.perf_counter() - t0 < 1.0


@criterion("AC-4", "four language equalities at budget (3 nodes, 4 edges); < 5 min")
def test_ac4_language_equalities():
    t0 = time.perf_counter()
    _, p, phi = running()
    rm = rewritable_materialize(phi, p.phi_l)
    reports = [check_materialization_language(phi, BUDGET),
               check_rewritable_language(phi, p, BUDGET, rm=rm),
               check_rewriting_abstract_matches(rm.n_l, p, BUDGET),
               check_comatch_language(phi, p, BUDGET)]
    for rep in reports:
        assert rep.passed, rep.to_dict()
        assert rep.left_size > 0
    assert [r.left_size for r in reports] == [255, 39, 39, 39]
    assert time.perf_counter() - t0 < 300


@criterion("AC-5", "every generated fpbc_mono square and the materialization square are FPBCs at bound 4")
def test_ac5_fpbc_certification():
    cases = 0
    for g in enumerate_graphs(EnumerationBudget(2, 2)):
        for lhs in subgraphs(g):
            for inter in subgraphs(lhs):
                alpha, m = inclusion(inter, lhs), inclusion(lhs, g)
                gamma, beta = fpbc_mono(alpha, m)
                assert is_fpbc(alpha, m, gamma, beta, 4), (g, lhs, inter)
                cases += 1
    assert cases == 257
    _, _, phi = running()
    assert is_fpbc(*materialization_square(materialize(phi)), 4)


@criterion("AC-6", "counting monoid laws for n <= 3 and functor laws for B^n, S^n, T")
def test_ac6_monoid_and_functor_laws():
    for n in (1, 2, 3):
        m = CountingMonoid(n)
        xs = list(m.elements())
        for a, b, c in itertools.product(xs, repeat=3):
            assert m.plus(m.plus(a, b), c) == m.plus(a, m.plus(b, c))
            assert m.plus(a, b) == m.plus(b, a)
            if a <= b:
                assert m.plus(a, c) <= m.plus(b, c)
        for a in xs:
            assert m.plus(a, 0) == a and m.minus(a, a) == 0
            for b in xs:
                if b <= a:
                    assert m.plus(m.minus(a, b), b) == a
    m3 = CountingMonoid(3)
    assert m3.plus(2, m3.minus(2, 1)) == 3
    assert m3.minus(m3.plus(2, 2), 1) == STAR
    for name in ("mult", "outdeg", "path"):
        rep = check_functor_laws(functor_by_name(name, 2), 3, max_edges=2)
        assert rep.passed, rep.to_dict()


@criterion("AC-7", "B^2 passes all six properties at bound 3; S^2 and T pass two and report the rest")
def test_ac7_property_battery():
    for which in ("homomorphism", "adjunction", "pushout", "pushout_standard", "beck_chevalley",
                  "isomorphism"):
        rep = check_property(F2, which, 3)
        assert rep.passed, rep.to_dict()
    for name in ("outdeg", "path"):
        f = functor_by_name(name, 2)
        assert check_property(f, "homomorphism", 3).passed
        assert check_property(f, "pushout_standard", 3).passed
        failing = [check_property(f, w, 3).to_dict()
                   for w in ("adjunction", "pushout", "beck_chevalley", "isomorphism")]
        failing = [r for r in failing if not r["passed"]]
        assert failing
        assert all(r["capability_absent"] or r["counterexample"] for r in failing)


def _nonvacuous_triples(count: int, seed: int):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a, p, phi = random_triple(rng)
        if verify_soundness(a, p, BUDGET, SQUIGGLE).cases:
            out.append((a, p, phi))
    return out


@criterion("AC-8", "soundness in both modes on the running example and 25 random triples; mutation caught")
def test_ac8_soundness():
    _, p, phi = running()
    a = annotate(phi.cod, F2)
    for mode in MODES:
        rep = verify_soundness(a, p, BUDGET, mode)
        assert rep.passed and rep.cases > 0
        assert not verify_soundness(a, p, BUDGET, mode, perturb=decrement_upper).passed
    caught = 0
    for a, p, phi in _nonvacuous_triples(25, seed=7):
        for mode in MODES:
            rep = verify_soundness(a, p, BUDGET, mode)
            assert rep.passed, rep.to_dict()
        caught += not verify_soundness(a, p, BUDGET, SQUIGGLE, perturb=decrement_upper).passed
    # lowering an upper bound is invisible when no member within the budget reaches it
    assert caught > 0


@criterion("AC-9", "completeness of hook steps with B^2 on the running example at (3, 4)")
def test_ac9_completeness():
    _, p, phi = running()
    rep = verify_completeness(annotate(phi.cod, F2), p, phi, BUDGET, HOOK)
    assert rep.passed and rep.cases > 0


@criterion("AC-10", "strongest post-condition at (3, 6) and the annotated result matches the figure; < 5 min")
def test_ac10_strongest_post():
    t0 = time.perf_counter()
    a, p, phi = annotated()
    rep = check_strongest_post(a, p, phi, EnumerationBudget(3, 6))
    assert rep.passed and rep.left_size > 0
    res = strongest_post(a, p, phi)
    assert len(res.pairs) == 1
    assert annotated_iso(res.annotated()[0], expected_annotated_result()) is not None
    assert time.perf_counter() - t0 < 300
