from __future__ import annotations

import pytest

from radai.model import (
    BoundaryContract,
    DebtEntry,
    DiagramElement,
    Document,
    LineageEdge,
    ModelEntry,
    MonitoringEntry,
    OperationalAIView,
    PipelineStage,
)
from radai.radl import parse, serialize
from radai.resolve import ResolutionError, dangling, entity_index, resolve_links


def test_fixture_resolves_and_resolution_is_idempotent(mobility_doc):
    once = resolve_links(mobility_doc)
    assert resolve_links(once) is once
    assert parse(serialize(once)) == mobility_doc


def test_dangling_references_are_reported_per_site():
    doc = Document(
        boundaries=(BoundaryContract("b", consumer="ghost", provider="a"),),
        elements=(DiagramElement("a"),),
        lineage_edges=(LineageEdge("a", "nowhere"),),
        debts=(DebtEntry("d", components=("phantom",)),),
        models=(ModelEntry("m", lineage_ref="lost"),),
    )
    found = {(r.subject, r.target, r.rule_id) for r in dangling(doc)}
    assert found == {
        ("b", "ghost", "X-001"),
        ("a->nowhere", "nowhere", "C4-002"),
        ("d", "phantom", "E7-002"),
        ("m", "lost", "E2-003"),
    }
    with pytest.raises(ResolutionError) as info:
        resolve_links(doc)
    assert {d.rule_id for d in info.value.diagnostics} == {"X-001"}
    assert len(info.value.diagnostics) == 4


def test_monitoring_may_name_a_model_or_its_element():
    spec = parse('[e2.model "m"]\n[c4.element "e"]\n').models[0]
    from radai.model import ConfidenceSpec

    ops = OperationalAIView(
        monitoring=(
            MonitoringEntry("m", ("mae",), ConfidenceSpec("mae", ">", 1)),
            MonitoringEntry("e", ("mae",), ConfidenceSpec("mae", ">", 1)),
        )
    )
    doc = Document(models=(spec,), elements=(DiagramElement("e"),), ops_view=ops)
    assert dangling(doc) == []


def test_duplicate_identifiers_across_kinds():
    doc = Document(
        elements=(DiagramElement("x"),),
        stages=(PipelineStage("x", kind="training"),),
    )
    with pytest.raises(ResolutionError) as info:
        resolve_links(doc)
    (d,) = info.value.diagnostics
    assert d.rule_id == "X-002" and "already declared as stage" in d.message


def test_model_versions_share_an_identifier():
    doc = Document(models=(ModelEntry("m", version="1"), ModelEntry("m", version="2")))
    assert resolve_links(doc) is doc
    with pytest.raises(ResolutionError):
        resolve_links(doc.replace(models=doc.models + (ModelEntry("m", version="2"),)))


def test_entity_index(mobility_doc):
    index = entity_index(mobility_doc)
    assert index["federated-feature-store"] == "element(feature_store)"
    assert index["route-gbt"] == "model"
    assert index["trip-ingest"] == "stage"
    assert index["adr-route-model"] == "adr"
