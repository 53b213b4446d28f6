"""Materialization and sound abstract rewriting of annotated graphs."""

from __future__ import annotations

from .abstract_rewrite import (HOOK, SQUIGGLE, AbstractStepResult, AnnotatedGraph,
                               AnnotatedMaterialization, abstract_step, annotate,
                               annotated_materializations, is_legal, member, strongest_post,
                               verify_completeness, verify_soundness, verify_terminal)
from .annotation import (STAR, CapabilityAbsent, CountingMonoid, PathSet, check_property,
                         functor_by_name, mult_functor, outdeg_functor, path_functor, path_plus)
from .classifiers import characteristic, fpbc_mono, is_fpbc, omega, pmc
from .dpo import DpoTrace, Production, dpo_step, find_matches
from .enumeration import EnumerationBudget, canonical_form, enumerate_graphs
from .graph import (Edge, Graph, GraphError, GraphMorphism, compose, enumerate_homs,
                    enumerate_monos, find_iso, identity, inclusion, is_epi, is_iso, is_mono,
                    validate)
from .limits import gluing_ok, is_pullback_square, is_pushout_square, pullback, pushout, \
    pushout_complement
from .materialization import (Materialization, RewritableMaterialization, materialization_terminal,
                              materialize, mono_language_member, rewritable_materialize,
                              rmat_language_check)
from .oracle import assert_language_equality, language


