"""JSON system specifications and DOT export.

A specification is one self-contained JSON object::

    {
      "labels": ["a"],
      "graphs": {"L": {"nodes": ["x", "y"], "edges": [{"id": "e", "src": "x", "tgt": "y", "label": "a"}]}},
      "morphisms": {"phi": {"from": "L", "to": "A", "nodes": {"x": "u"}, "edges": {"e": "a"}}},
      "rules": {"p": {"left": "phiL", "right": "phiR"}},
      "annotated": {"A1": {"graph": "A", "functor": "mult", "n": 2,
                           "lower": {"nodes": {"u": 1}}, "upper": {"edges": {"a": "*"}}}}
    }

Edges may also be written as ``[id, src, tgt, label]``.  A rule either names
its two legs or gives ``lhs``/``interface``/``rhs`` graphs whose shared ids
define the inclusions.  Unlisted annotation values default to ``0`` (lower)
and ``*`` (upper).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .abstract_rewrite import AnnotatedGraph
from .annotation import AnnotationFunctor, PathFunctor, functor_by_name
from .dpo import Production
from .graph import Edge, Graph, GraphError, GraphMorphism, inclusion, validate


class SpecError(ValueError):
    """Malformed or inconsistent specification; names the offending identifier."""


@dataclass
class SystemSpec:
    labels: tuple[str, ...] = ()
    graphs: dict[str, Graph] = field(default_factory=dict)
    morphisms: dict[str, GraphMorphism] = field(default_factory=dict)
    rules: dict[str, Production] = field(default_factory=dict)
    annotated: dict[str, AnnotatedGraph] = field(default_factory=dict)
    # how rules and annotations were written, for serialization
    rule_legs: dict[str, tuple[str, str]] = field(default_factory=dict)
    annotated_src: dict[str, dict] = field(default_factory=dict)

    def _get(self, table: str, name: str):
        try:
            return getattr(self, table)[name]
        except KeyError:
            raise SpecError(f"unresolved name: no {table[:-1]} {name!r}") from None

    def graph(self, name: str) -> Graph:
        return self._get("graphs", name)

    def morphism(self, name: str) -> GraphMorphism:
        return self._get("morphisms", name)

    def rule(self, name: str) -> Production:
        return self._get("rules", name)

    def annotated_graph(self, name: str) -> AnnotatedGraph:
        return self._get("annotated", name)

    def graph_name(self, g: Graph) -> Optional[str]:
        return next((k for k, v in self.graphs.items() if v is g), None) or \
            next((k for k, v in self.graphs.items() if v == g), None)


# -- parsing -------------------------------------------------------------------

def _parse_edge(raw, gname: str) -> Edge:
    if isinstance(raw, dict):
        try:
            return Edge(raw["id"], raw["src"], raw["tgt"], raw.get("label", "a"))
        except KeyError as exc:
            raise SpecError(f"graph {gname!r}: edge {raw!r} lacks {exc.args[0]!r}") from None
    if isinstance(raw, (list, tuple)) and len(raw) in (3, 4):
        return Edge(*[str(x) for x in raw]) if len(raw) == 4 else Edge(*raw, "a")
    raise SpecError(f"graph {gname!r}: cannot read edge {raw!r}")


def parse_graph(data: dict, name: str = "?", labels=None) -> Graph:
    if not isinstance(data, dict):
        raise SpecError(f"graph {name!r} must be an object")
    nodes = [str(v) for v in data.get("nodes", [])]
    edges = [_parse_edge(e, name) for e in data.get("edges", [])]
    # validate before construction so that every defect is named
    seen_n, seen_e = set(), set()
    for v in nodes:
        if v in seen_n:
            raise SpecError(f"graph {name!r}: duplicate node id {v!r}")
        seen_n.add(v)
    for e in edges:
        if e.id in seen_e:
            raise SpecError(f"graph {name!r}: duplicate edge id {e.id!r}")
        seen_e.add(e.id)
        for end in (e.src, e.tgt):
            if end not in seen_n:
                raise SpecError(f"graph {name!r}: edge {e.id!r} has dangling endpoint {end!r}")
    g = Graph(nodes, edges)
    try:
        validate(g, labels)
    except GraphError as exc:
        raise SpecError(f"graph {name!r}: {exc}") from None
    return g


def parse_morphism(data: dict, name: str, graphs: dict[str, Graph]) -> GraphMorphism:
    for key in ("from", "to"):
        if key not in data:
            raise SpecError(f"morphism {name!r} lacks {key!r}")
        if data[key] not in graphs:
            raise SpecError(f"morphism {name!r}: unresolved graph {data[key]!r}")
    try:
        return GraphMorphism(graphs[data["from"]], graphs[data["to"]], data.get("nodes", {}),
                             data.get("edges", {}))
    except (GraphError, KeyError) as exc:
        raise SpecError(f"morphism {name!r}: {exc}") from None


def _parse_annotation(functor: AnnotationFunctor, g: Graph, data: Optional[dict], default,
                      where: str):
    try:
        return functor.from_json(g, data, default)
    except (ValueError, GraphError) as exc:
        raise SpecError(f"annotated {where}: {exc}") from None


def parse_annotated(data: dict, name: str, graphs: dict[str, Graph]) -> AnnotatedGraph:
    gname = data.get("graph")
    if gname not in graphs:
        raise SpecError(f"annotated {name!r}: unresolved graph {gname!r}")
    g = graphs[gname]
    try:
        functor = functor_by_name(data.get("functor", "mult"), int(data.get("n", 2)))
    except ValueError as exc:
        raise SpecError(f"annotated {name!r}: {exc}") from None
    lo_default = functor.zero(g) if isinstance(functor, PathFunctor) else 0
    hi_default = functor.top(g) if isinstance(functor, PathFunctor) else float("inf")
    lower = _parse_annotation(functor, g, data.get("lower"), lo_default, f"{name!r} lower")
    upper = _parse_annotation(functor, g, data.get("upper"), hi_default, f"{name!r} upper")
    return AnnotatedGraph(g, lower, upper, functor)


def parse_spec(data: dict) -> SystemSpec:
    if not isinstance(data, dict):
        raise SpecError("specification must be a JSON object")
    labels = tuple(data.get("labels", ()))
    spec = SystemSpec(labels=labels)
    for name, g in data.get("graphs", {}).items():
        spec.graphs[name] = parse_graph(g, name, labels or None)
    for name, m in data.get("morphisms", {}).items():
        spec.morphisms[name] = parse_morphism(m, name, spec.graphs)
    for name, r in data.get("rules", {}).items():
        if "left" in r:
            left, right = spec.morphism(r["left"]), spec.morphism(r.get("right", ""))
            spec.rule_legs[name] = (r["left"], r["right"])
        else:
            try:
                lhs, inter, rhs = (spec.graph(r[k]) for k in ("lhs", "interface", "rhs"))
            except KeyError as exc:
                raise SpecError(f"rule {name!r} lacks {exc.args[0]!r}") from None
            try:
                left, right = inclusion(inter, lhs), inclusion(inter, rhs)
            except GraphError as exc:
                raise SpecError(f"rule {name!r}: interface is not a subgraph: {exc}") from None
        try:
            spec.rules[name] = Production(left, right, name)
        except GraphError as exc:
            raise SpecError(f"rule {name!r}: {exc}") from None
    for name, a in data.get("annotated", {}).items():
        spec.annotated[name] = parse_annotated(a, name, spec.graphs)
        spec.annotated_src[name] = a
    return spec


def load_spec(path: str) -> SystemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    return parse_spec(data)


# -- serialization -------------------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    return {"nodes": list(g.nodes),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt, "label": e.label} for e in g.edges]}


def morphism_to_json(f: GraphMorphism, src: str = "", dst: str = "") -> dict:
    out = {"from": src, "to": dst} if src or dst else {}
    out["nodes"] = {v: f.node_map[v] for v in f.dom.nodes}
    out["edges"] = {e: f.edge_map[e] for e in f.dom.edge_ids}
    return out


def annotated_to_json(a: AnnotatedGraph, graph_name: str = "") -> dict:
    f = a.functor
    out: dict[str, Any] = {"graph": graph_name} if graph_name else {"graph_data": graph_to_json(a.graph)}
    out["functor"] = f.name
    if hasattr(f, "n"):
        out["n"] = f.n
    out["lower"] = f.to_json(a.graph, a.lower)
    out["upper"] = f.to_json(a.graph, a.upper)
    return out


def serialize_spec(spec: SystemSpec) -> dict:
    """Canonical JSON: every annotation value written out, rules as named legs or graphs."""
    names = {id(g): k for k, g in spec.graphs.items()}

    def gname(g: Graph) -> str:
        if id(g) in names:
            return names[id(g)]
        found = spec.graph_name(g)
        if found is None:
            raise SpecError("graph not in the specification")
        return found

    rules = {}
    for name, p in spec.rules.items():
        if name in spec.rule_legs:
            rules[name] = {"left": spec.rule_legs[name][0], "right": spec.rule_legs[name][1]}
        else:
            rules[name] = {"lhs": gname(p.lhs), "interface": gname(p.interface), "rhs": gname(p.rhs)}
    return {
        "labels": list(spec.labels),
        "graphs": {k: graph_to_json(g) for k, g in spec.graphs.items()},
        "morphisms": {k: morphism_to_json(f, gname(f.dom), gname(f.cod))
                      for k, f in spec.morphisms.items()},
        "rules": rules,
        "annotated": {k: annotated_to_json(a, gname(a.graph)) for k, a in spec.annotated.items()},
    }


# -- DOT -----------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, *, name: str = "G", dashed: Optional[set] = None,
           node_labels: Optional[dict] = None, edge_labels: Optional[dict] = None) -> str:
    """DOT text; items in ``dashed`` are drawn dashed, extra labels are appended."""
    dashed = set() if dashed is None else dashed
    nl = node_labels or {}
    el = edge_labels or {}
    lines = [f"digraph {_q(name)} {{"]
    for v in g.nodes:
        attrs = [f"label={_q(v + (' ' + nl[v] if v in nl else ''))}"]
        if v in dashed:
            attrs.append("style=dashed")
        lines.append(f"  {_q(v)} [{', '.join(attrs)}];")
    for e in g.edges:
        attrs = [f"label={_q(e.label + (' ' + el[e.id] if e.id in el else ''))}"]
        if e.id in dashed:
            attrs.append("style=dashed")
        lines.append(f"  {_q(e.src)} -> {_q(e.tgt)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def materialization_dot(mat: Graph, eta: GraphMorphism, name: str = "mat") -> str:
    """Materialization with everything outside the image of ``eta`` dashed."""
    img = eta.node_image() | eta.edge_image()
    dashed = {v for v in mat.nodes if v not in img} | {e for e in mat.edge_ids if e not in img}
    return to_dot(mat, name=name, dashed=dashed)


def annotated_dot(a: AnnotatedGraph, name: str = "A") -> str:
    """Items labelled ``[lower,upper]``; path annotations are listed in the graph label."""
    f = a.functor
    if isinstance(f, PathFunctor):
        text = to_dot(a.graph, name=name)
        lo = ",".join(f"{u}>{v}" for u, v in sorted(a.lower.pairs))
        hi = ",".join(f"{u}>{v}" for u, v in sorted(a.upper.pairs))
        return text.replace("{\n", f"{{\n  label={_q(f'lower {{{lo}}} upper {{{hi}}}')};\n", 1)
    lo, hi = f.to_json(a.graph, a.lower), f.to_json(a.graph, a.upper)
    nl = {v: f"[{lo['nodes'][v]},{hi['nodes'][v]}]" for v in a.graph.nodes}
    el = {e: f"[{lo['edges'][e]},{hi['edges'][e]}]" for e in lo.get("edges", {})}
    return to_dot(a.graph, name=name, node_labels=nl, edge_labels=el)
