from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from radai.diagnostics import SourceSpan
from radai.model import (
    AttachmentRef,
    ConfidenceSpec,
    DebtEntry,
    DiagramElement,
    Document,
    Duration,
    LineageEdge,
    MonitoringEntry,
    Pipeline,
    QualityScenario,
    RiskClass,
    RollbackPolicy,
    Stereotype,
    TrafficShare,
    VocabularyError,
    check_ident,
)


@pytest.mark.parametrize(
    "text, seconds, canonical",
    [
        ("P1D", 86400, "P1D"),
        ("PT2H", 7200, "PT2H"),
        ("P1DT2H30M", 86400 + 9000, "P1DT2H30M"),
        ("P1W", 7 * 86400, "P7D"),
        ("PT90S", 90, "PT1M30S"),
        ("P1Y", 365 * 86400, "P365D"),
        ("P1M", 30 * 86400, "P30D"),
    ],
)
def test_duration_parse_and_canonical_form(text, seconds, canonical):
    d = Duration.parse(text)
    assert d.seconds == seconds
    assert str(d) == canonical
    assert Duration.parse(str(d)) == d


@pytest.mark.parametrize("bad", ["", "P", "PT", "1D", "P-1D", "PT0S", "daily"])
def test_duration_rejects_malformed(bad):
    with pytest.raises(ValueError):
        Duration.parse(bad)


@given(st.integers(1, 10**10))
def test_duration_text_round_trip(seconds):
    assert Duration.parse(str(Duration(seconds))).seconds == seconds


def test_vocabulary_error_lists_allowed_values():
    with pytest.raises(VocabularyError) as info:
        DiagramElement("x", stereotype="database")
    assert "ml_model" in str(info.value)
    assert "database" in str(info.value)


def test_ml_model_element_cannot_be_deterministic():
    with pytest.raises(ValueError, match="cannot be deterministic"):
        DiagramElement("m", stereotype=Stereotype.ML_MODEL, deterministic=True)
    assert DiagramElement("m", stereotype="ml_model", deterministic=False).stereotype is Stereotype.ML_MODEL


def test_enum_fields_coerce_from_strings():
    el = DiagramElement("a", stereotype="feature_store", deterministic=False, risk_class="high_risk")
    assert el.risk_class is RiskClass.HIGH_RISK
    assert el.risk_class.label == "high-risk"
    assert el.stereotype.label == "Feature Store"


@pytest.mark.parametrize("good", ["a", "route-optimization", "A.b_c-9"])
def test_identifiers_accept(good):
    assert check_ident(good, "id") == good


@pytest.mark.parametrize("bad", ["", "9lives", "-x", "has space", "a/b", 'q"'])
def test_identifiers_reject(bad):
    with pytest.raises(ValueError):
        check_ident(bad, "id")


def test_confidence_spec_text():
    spec = ConfidenceSpec("precision", ">=", 0.92, None, "P95 latency < 50 ms")
    assert str(spec) == "precision >= 0.92 @ P95 latency < 50 ms"
    assert str(ConfidenceSpec("mae", "<=", 5.5, "min")) == "mae <= 5.5 min"
    assert str(ConfidenceSpec("rate", "<", 1.0, "%")) == "rate < 1 %"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"metric": "two words", "comparator": "<", "value": 1},
        {"metric": "m", "comparator": "~", "value": 1},
        {"metric": "m", "comparator": "<", "value": float("nan")},
        {"metric": "m", "comparator": "<", "value": 1, "condition": " padded "},
    ],
)
def test_confidence_spec_rejects(kwargs):
    with pytest.raises(ValueError):
        ConfidenceSpec(**kwargs)


def test_entity_invariants():
    with pytest.raises(ValueError):
        Pipeline("p", stages=())
    with pytest.raises(ValueError):
        Pipeline("p", stages=("a", "a"))
    with pytest.raises(ValueError):
        LineageEdge("a", "a")
    with pytest.raises(ValueError):
        TrafficShare("canary", 101)
    with pytest.raises(ValueError):
        RollbackPolicy(retention_depth=0)
    with pytest.raises(ValueError):
        MonitoringEntry("m", (), ConfidenceSpec("mae", "<", 1))
    with pytest.raises(ValueError):
        AttachmentRef("a", "other", "x.md")
    with pytest.raises(ValueError):
        QualityScenario("s", source="other")
    with pytest.raises(VocabularyError):
        DebtEntry("d", category="tech_debt")


def test_document_title_needs_project():
    with pytest.raises(ValueError):
        Document(title="orphan")
    with pytest.raises(ValueError):
        Document(base_sections=frozenset({13}))


def test_document_equality_ignores_order_and_spans():
    a = DiagramElement("a", span=SourceSpan("x.radl", 1, 1, 2, 5))
    b = DiagramElement("b")
    d1 = Document(elements=(a, b))
    d2 = Document(elements=(DiagramElement("b", span=SourceSpan("y.radl", 9, 1, 9, 1)), DiagramElement("a")))
    assert d1 == d2
    assert d1 != Document(elements=(a,))


def test_document_without_removes_by_identity():
    a, b = DiagramElement("a"), DiagramElement("b")
    doc = Document(elements=(a, b))
    assert doc.without(a).elements == (b,)
    with pytest.raises(ValueError):
        doc.without(DiagramElement("a"))


def test_empty_document():
    assert Document().is_empty()
    assert not Document(base_sections=frozenset({1})).is_empty()
