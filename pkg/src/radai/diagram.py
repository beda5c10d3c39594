"""PlantUML and Graphviz text for stereotyped component, lineage and boundary views.

Output is structure only; layout is left to the renderer. Elements are
emitted in identifier order so the same document always yields the same
bytes.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum

from radai.lineage import boundary_crossings, build_graph
from radai.model import Document, LineageEdge, coerce_enum
from radai.radl import RADL_VERSION

GENERATOR = "radai"


def _flat(text: str) -> str:
    """Free text on one line: control and line-separator characters become spaces."""
    return "".join(" " if unicodedata.category(c) in ("Cc", "Zl", "Zp") else c for c in text)


class View(str, Enum):
    CONTEXT = "context"
    COMPONENT = "component"
    LINEAGE = "lineage"
    BOUNDARY = "boundary"


class Format(str, Enum):
    PUML = "puml"
    DOT = "dot"


NONDET_REGION = "Non-deterministic region"
DET_REGION = "Deterministic region"


@dataclass(frozen=True)
class DiagramRequest:
    view: View = View.COMPONENT
    format: Format = Format.PUML
    include_risk_labels: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "view", coerce_enum(self.view, View, "view"))
        object.__setattr__(self, "format", coerce_enum(self.format, Format, "format"))


@dataclass(frozen=True)
class _Node:
    node_id: str
    label: str
    deterministic: bool
    note: str | None = None


@dataclass(frozen=True)
class _Edge:
    source: str
    target: str
    dotted: bool
    label: str | None = None


def edge_annotation(edge: LineageEdge) -> str | None:
    parts = []
    if edge.schema_note is not None:
        parts.append(f"schema={_flat(edge.schema_note)}")
    if edge.freshness is not None:
        parts.append(f"fresh={edge.freshness}")
    if edge.privacy_class is not None:
        parts.append(f"privacy={edge.privacy_class.value}")
    return "; ".join(parts) or None


def _nodes(doc: Document, req: DiagramRequest) -> dict[str, _Node]:
    nodes: dict[str, _Node] = {}
    for el in doc.elements:
        lines = []
        if el.stereotype is not None:
            lines.append(f"«{el.stereotype.label}»")
        name = _flat(el.display_name)
        if req.include_risk_labels and el.risk_class is not None:
            name += f" [{el.risk_class.label}]"
        lines.append(name)
        note = None
        rc = el.region_contract
        if rc is not None and req.view is View.BOUNDARY:
            note = "\n".join(
                f"{k}: {_flat(str(v))}" for k, v in (("confidence", rc.confidence), ("fallback", rc.fallback), ("degradation", rc.degradation)) if v is not None
            )
        nodes[el.element_id] = _Node(el.element_id, "\n".join(lines), el.deterministic, note or None)
    for st in doc.stages:
        nodes.setdefault(st.stage_id, _Node(st.stage_id, f"«Pipeline Stage»\n{st.stage_id} ({st.kind.value})", False))
    return nodes


def _layout(doc: Document, req: DiagramRequest) -> tuple[list[_Node], list[_Edge]]:
    """Nodes and edges shown in the requested view, both sorted."""
    nodes = _nodes(doc, req)
    g = build_graph(doc)
    if req.view is View.LINEAGE:
        edges = [
            _Edge(e.source, e.target, True, edge_annotation(e))
            for e in doc.canonical("lineage_edges")
            if e.source in nodes and e.target in nodes
        ]
        shown = {n for e in edges for n in (e.source, e.target)}
    elif req.view is View.CONTEXT:
        shown = {e.element_id for e in doc.elements}
        edges = [_Edge(a, b, False) for a, b in g.edge_list() if a in shown and b in shown]
    elif req.view is View.COMPONENT:
        shown = set(nodes)
        edges = [_Edge(a, b, False) for a, b in g.edge_list()]
    else:
        shown = set(nodes)
        contracts = {(b.consumer, b.provider): b.interface_id for b in doc.canonical("boundaries")}
        edges = []
        for a, b in boundary_crossings(g):
            label = contracts.get((a, b)) or contracts.get((b, a))
            edges.append(_Edge(a, b, False, f"contract {label}" if label else None))
    return [nodes[n] for n in sorted(shown)], edges


def _aliases(ids: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    used: set[str] = set()
    for i in sorted(ids):
        base = re.sub(r"[^A-Za-z0-9_]", "_", i)
        alias, n = base, 1
        while alias in used:
            n += 1
            alias = f"{base}_{n}"
        used.add(alias)
        out[i] = alias
    return out


def _puml_text(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', "'").replace("\n", "\\n")


def _emit_puml(doc: Document, req: DiagramRequest, nodes: list[_Node], edges: list[_Edge]) -> str:
    alias = _aliases([n.node_id for n in nodes])
    out = [f"' generated by {GENERATOR} from radl {RADL_VERSION}", "@startuml"]
    if doc.title:
        out.append(f"title {_puml_text(_flat(doc.title))} ({req.view.value} view)")

    def declare(n: _Node, indent: str = "") -> list[str]:
        lines = [f'{indent}component "{_puml_text(n.label)}" as {alias[n.node_id]}']
        if n.note:
            lines.append(f"{indent}note right of {alias[n.node_id]}")
            lines.extend(f"{indent}  {line}" for line in n.note.splitlines())
            lines.append(f"{indent}end note")
        return lines

    if req.view is View.BOUNDARY:
        for title, flag in ((NONDET_REGION, False), (DET_REGION, True)):
            members = [n for n in nodes if n.deterministic is flag]
            out.append(f'package "{title}" {{')
            for n in members:
                out.extend(declare(n, "  "))
            out.append("}")
    else:
        for n in nodes:
            out.extend(declare(n))
    for e in edges:
        arrow = "..>" if e.dotted else "-->"
        line = f"{alias[e.source]} {arrow} {alias[e.target]}"
        if e.label:
            line += f" : {_puml_text(e.label)}"
        out.append(line)
    out.append("@enduml")
    return "\n".join(out) + "\n"


def _dot_text(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _emit_dot(doc: Document, req: DiagramRequest, nodes: list[_Node], edges: list[_Edge]) -> str:
    out = [f"// generated by {GENERATOR} from radl {RADL_VERSION}", "digraph radai {", "  node [shape=box];"]
    if doc.title:
        out.append(f'  label="{_dot_text(f"{_flat(doc.title)} ({req.view.value} view)")}";')

    def declare(n: _Node, indent: str) -> list[str]:
        lines = [f'{indent}"{_dot_text(n.node_id)}" [label="{_dot_text(n.label)}"];']
        if n.note:
            note_id = _dot_text(f"{n.node_id}#note")
            lines.append(f'{indent}"{note_id}" [shape=note, label="{_dot_text(n.note)}"];')
            lines.append(f'{indent}"{note_id}" -> "{_dot_text(n.node_id)}" [style=dashed, arrowhead=none];')
        return lines

    if req.view is View.BOUNDARY:
        for i, (title, flag) in enumerate(((NONDET_REGION, False), (DET_REGION, True))):
            out.append(f"  subgraph cluster_{i} {{")
            out.append(f'    label="{title}";')
            for n in nodes:
                if n.deterministic is flag:
                    out.extend(declare(n, "    "))
            out.append("  }")
    else:
        for n in nodes:
            out.extend(declare(n, "  "))
    for e in edges:
        attrs = ["style=dotted"] if e.dotted else []
        if e.label:
            attrs.append(f'label="{_dot_text(e.label)}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f'  "{_dot_text(e.source)}" -> "{_dot_text(e.target)}"{suffix};')
    out.append("}")
    return "\n".join(out) + "\n"


def emit(doc: Document, req: DiagramRequest) -> str:
    nodes, edges = _layout(doc, req)
    if req.format is Format.PUML:
        return _emit_puml(doc, req, nodes, edges)
    return _emit_dot(doc, req, nodes, edges)


def emit_lineage_overlay(doc: Document, format: Format | str = Format.PUML) -> str:
    """Standalone data-lineage layer: one dotted edge per declared lineage edge."""
    return emit(doc, DiagramRequest(View.LINEAGE, format))
