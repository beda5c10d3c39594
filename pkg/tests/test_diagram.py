from __future__ import annotations

import re

import pytest
from hypothesis import HealthCheck, given, settings

from radai.diagram import DiagramRequest, Format, View, edge_annotation, emit, emit_lineage_overlay
from radai.model import DiagramElement, Document, Duration, LineageEdge
from strategies import documents

PUML_DECL = re.compile(r'^\s*component "(?P<label>(?:[^"\\]|\\.)*)" as (?P<alias>\S+)$')
PUML_EDGE = re.compile(r"^(?P<a>\S+) (?P<arrow>-->|\.\.>) (?P<b>\S+)(?: : .*)?$")
# Region-contract notes are separate "<id>#note" nodes in dot; the scanners skip them.
DOT_DECL = re.compile(r'^\s*"(?P<id>[^"#]+)" \[label=')
DOT_EDGE = re.compile(r'^\s*"(?P<a>[^"#]+)" -> "(?P<b>[^"#]+)"')

ELEMENT_VIEWS = (View.CONTEXT, View.COMPONENT, View.BOUNDARY)


def scan_puml(text: str) -> tuple[list[str], list[tuple[str, str, str]]]:
    """Check marker balance and return (declared aliases, edges)."""
    lines = text.splitlines()
    assert lines[0].startswith("' generated by radai")
    assert lines.count("@startuml") == 1 and lines.count("@enduml") == 1
    assert lines.index("@startuml") < lines.index("@enduml") == len(lines) - 1
    depth, in_note, body = 0, False, []
    for line in lines:
        stripped = line.strip()
        if in_note:
            in_note = stripped != "end note"
            continue
        if stripped.startswith("note "):
            in_note = True
        elif stripped.startswith("package ") and stripped.endswith("{"):
            depth += 1
        elif stripped == "}":
            depth -= 1
        assert depth >= 0
        body.append(line)
    assert depth == 0 and not in_note
    aliases = [m["alias"] for m in map(PUML_DECL.match, body) if m]
    edges = [(m["a"], m["arrow"], m["b"]) for m in map(PUML_EDGE.match, body) if m]
    return aliases, edges


def test_empty_document_is_a_skeleton():
    for view in View:
        text = emit(Document(), DiagramRequest(view))
        assert text == "' generated by radai from radl 1\n@startuml\n@enduml\n" or text.count("component") == 0
        scan_puml(text)
    assert emit_lineage_overlay(Document()) == emit(Document(), DiagramRequest(View.LINEAGE))
    assert "digraph radai {" in emit(Document(), DiagramRequest(View.CONTEXT, Format.DOT))


def test_boundary_view_on_fixture(mobility_doc):
    text = emit(mobility_doc, DiagramRequest(View.BOUNDARY))
    nondet, det = text.split('package "Deterministic region"')
    assert 'package "Non-deterministic region"' in nondet
    for label in ("«ML Model»\\nAnomaly Detection System [high-risk]", "«Feature Store»", "«Monitor»"):
        assert label in nondet
    assert sum(1 for m in map(PUML_DECL.match, nondet.splitlines()) if m and "Pipeline Stage" not in m["label"]) == 5
    assert "«Human-in-the-Loop»\\nOperator Dashboard" in det
    assert "fallback: timetable routes" in nondet
    assert "contract dashboard-routes" in det


def test_risk_labels_can_be_switched_off(mobility_doc):
    text = emit(mobility_doc, DiagramRequest(View.COMPONENT, include_risk_labels=False))
    assert "[high-risk]" not in text and "Anomaly Detection System" in text


def test_elements_are_sorted(mobility_doc):
    aliases, _ = scan_puml(emit(mobility_doc, DiagramRequest(View.CONTEXT)))
    assert aliases == sorted(aliases)


def test_lineage_overlay_on_fixture(mobility_doc):
    text = emit_lineage_overlay(mobility_doc)
    _, edges = scan_puml(text)
    assert len(edges) == 8 and all(arrow == "..>" for _, arrow, _ in edges)
    (line,) = [l for l in text.splitlines() if l.startswith("federated_feature_store ..> demand_prediction")]
    assert "privacy=personal" in line
    dot = emit_lineage_overlay(mobility_doc, "dot")
    assert sum(1 for l in dot.splitlines() if DOT_EDGE.match(l)) == 8
    assert "style=dotted" in dot


def test_edge_annotation():
    edge = LineageEdge("a", "b", schema_note="v1", freshness=Duration(60), privacy_class="personal")
    assert edge_annotation(edge) == "schema=v1; fresh=PT1M; privacy=personal"
    assert edge_annotation(LineageEdge("a", "b", privacy_class="public")) == "privacy=public"
    assert edge_annotation(LineageEdge("a", "b")) is None


def test_privacy_annotation_on_constructed_edge():
    doc = Document(
        elements=(DiagramElement("feature-store"), DiagramElement("demand-prediction")),
        lineage_edges=(LineageEdge("feature-store", "demand-prediction", privacy_class="personal"),),
    )
    (line,) = [l for l in emit_lineage_overlay(doc).splitlines() if "..>" in l]
    assert "privacy=personal" in line


def test_alias_collisions_are_disambiguated():
    doc = Document(elements=(DiagramElement("a-b"), DiagramElement("a.b"), DiagramElement("a_b")))
    aliases, _ = scan_puml(emit(doc, DiagramRequest(View.CONTEXT)))
    assert len(set(aliases)) == 3


@pytest.mark.parametrize("view", list(View))
@pytest.mark.parametrize("fmt", list(Format))
def test_emission_is_deterministic(mobility_doc, view, fmt):
    req = DiagramRequest(view, fmt)
    assert emit(mobility_doc, req) == emit(mobility_doc, req)


def test_dot_mirrors_puml(mobility_doc):
    for view in View:
        puml_aliases, puml_edges = scan_puml(emit(mobility_doc, DiagramRequest(view)))
        dot = emit(mobility_doc, DiagramRequest(view, Format.DOT)).splitlines()
        assert dot[0].startswith("// generated by radai")
        assert len([l for l in dot if DOT_DECL.match(l)]) == len(puml_aliases)
        assert len([l for l in dot if DOT_EDGE.match(l)]) == len(puml_edges)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
@given(documents())
def test_every_element_once_and_every_identifier_resolves(doc):
    known = {e.element_id for e in doc.elements} | {s.stage_id for s in doc.stages}
    for view in ELEMENT_VIEWS:
        lines = emit(doc, DiagramRequest(view, Format.DOT)).splitlines()
        declared = [m["id"] for m in map(DOT_DECL.match, lines) if m]
        assert len(declared) == len(set(declared))
        assert {e.element_id for e in doc.elements} <= set(declared) <= known
        for m in map(DOT_EDGE.match, lines):
            if m:
                assert {m["a"], m["b"]} <= set(declared)
        aliases, edges = scan_puml(emit(doc, DiagramRequest(view)))
        assert len(aliases) == len(set(aliases)) == len(declared)
        assert all(a in aliases and b in aliases for a, _, b in edges)
