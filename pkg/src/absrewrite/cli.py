"""Command-line interface: ``absrewrite <command> <spec.json> [flags]``.

Results are printed as JSON.  Exit status 0 means success (or the checked
property holds), 1 that a property is violated or a step does not exist, and
2 that the input is malformed or a capability is missing.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from . import abstract_rewrite as ar
from . import oracle
from .annotation import PROPERTIES, CapabilityAbsent, check_property, functor_by_name
from .dpo import dpo_step
from .enumeration import EnumerationBudget
from .graph import GraphError
from .io import (SpecError, SystemSpec, annotated_dot, graph_to_json, load_spec,
                 materialization_dot, morphism_to_json, to_dot)
from .materialization import materialization_terminal, materialize, rewritable_materialize

OK, VIOLATED, INPUT_ERROR = 0, 1, 2


class _Fail(Exception):
    """A property or construction failed; carries the JSON payload."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("reason", "failed"))
        self.payload = payload


def _budget(args) -> EnumerationBudget:
    edges = args.edges if args.edges is not None else args.bound + 1
    return EnumerationBudget(args.bound, edges)


def _step_json(spec: SystemSpec, res: ar.AbstractStepResult) -> dict:
    f = res.functor
    return {
        "mode": res.mode,
        "B": graph_to_json(res.graph),
        "comatch": morphism_to_json(res.comatch),
        "materialization": {
            "graph": graph_to_json(res.rm.rmat),
            "match": morphism_to_json(res.rm.n_l),
            "annotations": [{"lower": f.to_json(res.rm.rmat, s.materialization.lower),
                             "upper": f.to_json(res.rm.rmat, s.materialization.upper)}
                            for s in res.steps],
        },
        "pairs": [{"lower": f.to_json(res.graph, b1), "upper": f.to_json(res.graph, b2)}
                  for b1, b2 in res.pairs],
    }


def cmd_materialize(spec: SystemSpec, args) -> dict:
    matz = materialize(spec.morphism(args.phi))
    out = {"graph": graph_to_json(matz.mat), "eta": morphism_to_json(matz.eta),
           "psi": morphism_to_json(matz.psi),
           "eta_edges": len(matz.eta.edge_image())}
    if args.check_terminal is not None:
        out["terminal"] = materialization_terminal(matz, args.check_terminal)
    if args.dot:
        out["dot"] = materialization_dot(matz.mat, matz.eta)
    return out


def cmd_rmaterialize(spec: SystemSpec, args) -> dict:
    p = spec.rule(args.rule)
    rm = rewritable_materialize(spec.morphism(args.phi), p.phi_l)
    out = {"F": graph_to_json(rm.f_graph), "graph": graph_to_json(rm.rmat),
           "match": morphism_to_json(rm.n_l), "psi": morphism_to_json(rm.psi)}
    trace = dpo_step(p, rm.n_l)
    out["B"] = graph_to_json(trace.result)
    out["comatch"] = morphism_to_json(trace.comatch)
    if args.dot:
        out["dot"] = materialization_dot(rm.rmat, rm.n_l, "rmat")
    return out


def cmd_dpo_step(spec: SystemSpec, args) -> dict:
    p = spec.rule(args.rule)
    trace = dpo_step(p, spec.morphism(args.match))
    if trace is None:
        raise _Fail({"reason": "pushout complement does not exist", "rule": args.rule,
                     "match": args.match})
    return {"C": graph_to_json(trace.context), "Y": graph_to_json(trace.result),
            "comatch": morphism_to_json(trace.comatch)}


def cmd_abstract_step(spec: SystemSpec, args) -> dict:
    res = ar.abstract_step(spec.annotated_graph(args.annotated), spec.rule(args.rule),
                           spec.morphism(args.phi), args.mode, method=args.method)
    out = _step_json(spec, res)
    if args.dot:
        out["dot"] = [annotated_dot(b, name=f"B{i}") for i, b in enumerate(res.annotated())]
    return out


def cmd_post(spec: SystemSpec, args) -> dict:
    a, p, phi = spec.annotated_graph(args.annotated), spec.rule(args.rule), spec.morphism(args.phi)
    out = _step_json(spec, ar.strongest_post(a, p, phi, method=args.method))
    if args.check:
        rep = oracle.check_strongest_post(a, p, phi, _budget(args))
        out["check"] = rep.to_dict()
        if not rep.passed:
            raise _Fail(out)
    return out


def cmd_member(spec: SystemSpec, args) -> dict:
    psi = ar.member(spec.graph(args.graph), spec.annotated_graph(args.annotated))
    if psi is None:
        raise _Fail({"member": False, "graph": args.graph, "annotated": args.annotated})
    return {"member": True, "witness": morphism_to_json(psi)}


def _report(rep) -> dict:
    out = rep.to_dict()
    if not rep.passed:
        raise _Fail(out)
    return out


def cmd_verify_soundness(spec: SystemSpec, args) -> dict:
    phis = [spec.morphism(m) for m in args.phi] if args.phi else None
    return _report(ar.verify_soundness(spec.annotated_graph(args.annotated), spec.rule(args.rule),
                                       _budget(args), args.mode, phis=phis))


def cmd_verify_completeness(spec: SystemSpec, args) -> dict:
    return _report(ar.verify_completeness(spec.annotated_graph(args.annotated),
                                          spec.rule(args.rule), spec.morphism(args.phi),
                                          _budget(args), args.mode))


def cmd_verify_languages(spec: SystemSpec, args) -> dict:
    phi, p, b = spec.morphism(args.phi), spec.rule(args.rule), _budget(args)
    rm = rewritable_materialize(phi, p.phi_l)
    reports = [oracle.check_materialization_language(phi, b),
               oracle.check_rewritable_language(phi, p, b, rm=rm),
               oracle.check_rewriting_abstract_matches(rm.n_l, p, b),
               oracle.check_comatch_language(phi, p, b)]
    if args.annotated:
        reports.append(oracle.check_strongest_post(spec.annotated_graph(args.annotated), p, phi, b))
    out = {"passed": all(r.passed for r in reports), "checks": [r.to_dict() for r in reports]}
    if not out["passed"]:
        raise _Fail(out)
    return out


def cmd_check_properties(spec: Optional[SystemSpec], args) -> dict:
    functor = functor_by_name(args.functor, args.n)
    which = args.property or list(PROPERTIES)
    reports = [check_property(functor, w, args.bound, max_annotations=args.samples).to_dict()
               for w in which]
    out = {"functor": args.functor, "n": args.n, "reports": reports,
           "passed": all(r["passed"] for r in reports)}
    if not out["passed"]:
        raise _Fail(out)
    return out


def cmd_export_dot(spec: SystemSpec, args) -> dict:
    if args.name in spec.annotated:
        return {"dot": annotated_dot(spec.annotated[args.name], args.name)}
    return {"dot": to_dot(spec.graph(args.name), name=args.name)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="absrewrite",
                                     description="Materialization and abstract graph rewriting.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, fn, helptext: str, needs_spec: bool = True):
        sp = sub.add_parser(name, help=helptext)
        if needs_spec:
            sp.add_argument("spec", help="JSON system specification")
        sp.set_defaults(fn=fn, needs_spec=needs_spec)
        return sp

    def bounded(sp, default: int = 3):
        sp.add_argument("--bound", type=int, default=default, help="maximal number of nodes")
        sp.add_argument("--edges", type=int, default=None,
                        help="maximal number of edges (default: bound + 1)")

    def modal(sp, default: str):
        sp.add_argument("--mode", choices=ar.MODES, default=default)

    sp = command("materialize", cmd_materialize, "materialization of a morphism L -> A")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--check-terminal", type=int, metavar="BOUND", default=None)
    sp.add_argument("--dot", action="store_true")

    sp = command("rmaterialize", cmd_rmaterialize, "rewritable materialization and its rewriting")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--dot", action="store_true")

    sp = command("dpo-step", cmd_dpo_step, "one concrete double-pushout step")
    sp.add_argument("--rule", required=True)
    sp.add_argument("--match", required=True)

    for name, fn, helptext in (("abstract-step", cmd_abstract_step, "abstract rewriting step"),
                               ("post", cmd_post, "strongest post-condition (hook mode)")):
        sp = command(name, fn, helptext)
        sp.add_argument("--annotated", required=True)
        sp.add_argument("--rule", required=True)
        sp.add_argument("--phi", required=True)
        sp.add_argument("--method", choices=("auto", "fast", "generic"), default="auto")
        if name == "abstract-step":
            modal(sp, ar.SQUIGGLE)
            sp.add_argument("--dot", action="store_true")
        else:
            sp.add_argument("--check", action="store_true",
                            help="compare with the brute-force post-image")
            bounded(sp)

    sp = command("member", cmd_member, "membership of a graph in an annotated language")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--annotated", required=True)

    sp = command("verify-soundness", cmd_verify_soundness, "bounded soundness check")
    sp.add_argument("--annotated", required=True)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--phi", action="append", help="restrict to these abstract matches")
    modal(sp, ar.SQUIGGLE)
    bounded(sp)

    sp = command("verify-completeness", cmd_verify_completeness, "bounded completeness check")
    sp.add_argument("--annotated", required=True)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--phi", required=True)
    modal(sp, ar.HOOK)
    bounded(sp)

    sp = command("verify-languages", cmd_verify_languages, "bounded language equalities")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--annotated", default=None, help="also check the strongest post-condition")
    bounded(sp)

    sp = command("check-annotation-properties", cmd_check_properties,
                 "property battery of an annotation functor", needs_spec=False)
    sp.add_argument("--functor", choices=("mult", "outdeg", "path"), default="mult")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--property", action="append", choices=PROPERTIES)
    sp.add_argument("--samples", type=int, default=16, help="annotations sampled per object")
    sp.add_argument("--bound", type=int, default=3)

    sp = command("export-dot", cmd_export_dot, "DOT text of a graph or annotated graph")
    sp.add_argument("name")
    return parser


def _emit(payload: Any) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec) if args.needs_spec else None
        payload = args.fn(spec, args)
    except _Fail as fail:
        _emit({"ok": False, **fail.payload})
        return VIOLATED
    except (SpecError, GraphError, CapabilityAbsent, ValueError) as exc:
        _emit({"ok": False, "error": str(exc)})
        return INPUT_ERROR
    _emit({"ok": True, **payload})
    return OK


if __name__ == "__main__":
    sys.exit(main())
