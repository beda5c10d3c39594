"""Structural rules for AI-extended arc42 and C4 documentation.

Every rule has a stable id (``E1-001``, ``C4-003``, ...) naming the extension
it enforces. Findings on explicitly required fields are errors; judgements
about density or coverage are warnings.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator

from radai.diagnostics import Diagnostic, Severity
from radai.lineage import LineageGraph, boundary_crossings, build_graph, cycles
from radai.model import (
    ADRStatus,
    AIADR,
    Concern,
    DebtCategory,
    Document,
    HEX_RE,
    ModelEntry,
    Stereotype,
)
from radai.resolve import dangling, duplicate_diagnostics

ERROR, WARNING, INFO = Severity.ERROR, Severity.WARNING, Severity.INFO

ANY = frozenset({"*"})


@dataclass(frozen=True)
class Rule:
    rule_id: str
    severity: Severity
    extension: str
    summary: str
    explanation: str
    # Entity collections whose removal may legitimately trigger this rule.
    triggered_by_removal: frozenset[str] = frozenset()


_E1 = "E1 (AI Boundary Delineation, extends arc42 Context and Scope)"
_E2 = "E2 (Model Registry View, extends arc42 Building Block View)"
_E3 = "E3 (Data Pipeline View, extends arc42 Runtime View)"
_E4 = "E4 (Responsible AI Concepts, extends arc42 Cross-cutting Concepts)"
_E5 = "E5 (AI Decision Records, extends arc42 Architecture Decisions)"
_E6 = "E6 (AI Quality Scenarios, extends arc42 Quality Requirements)"
_E7 = "E7 (AI Debt Register, extends arc42 Risks and Technical Debt)"
_E8 = "E8 (Operational AI View, additional arc42 view)"
_C4E1 = "C4-E1 (AI Component Stereotypes)"
_C4E2 = "C4-E2 (Data Lineage Overlay)"
_C4E3 = "C4-E3 (Non-Determinism Boundary)"

RULES: dict[str, Rule] = {
    r.rule_id: r
    for r in (
        Rule("E1-001", ERROR, _E1, "boundary crossing without a contract",
             "Every edge that crosses from the deterministic into the non-deterministic region "
             "must be annotated with a four-part boundary contract naming its two endpoints.",
             frozenset({"boundaries"})),
        Rule("E1-002", ERROR, _E1, "boundary contract missing a part",
             "A boundary contract states the output type, a confidence specification, the model "
             "update frequency and the fallback behaviour; all four are required."),
        Rule("E1-003", ERROR, _E1, "boundary contract endpoints misplaced",
             "The consumer of a boundary contract sits in the deterministic region and its "
             "provider on the AI side; both endpoints must be declared."),
        Rule("E2-001", ERROR, _E2, "model registry entry missing a field",
             "Each registered model records version, framework, training dataset hash, primary "
             "metric with acceptance threshold, deployment status, owner and last-retrained date."),
        Rule("E2-002", ERROR, _E2, "malformed dataset hash",
             "Training dataset hashes are lowercase hexadecimal digests of 8 to 64 characters."),
        Rule("E2-003", ERROR, _E2, "dangling lineage reference",
             "A model's lineage reference must name an element or pipeline stage of the lineage graph.",
             ANY),
        Rule("E3-001", WARNING, _E3, "pipeline stage without quality gates",
             "Pipeline stages are expected to carry at least one quality gate."),
        Rule("E3-002", ERROR, _E3, "incomplete quality gate",
             "A quality gate names a check type (schema, distribution, completeness), a threshold "
             "and the action taken on failure (halt, alert and continue, activate fallback)."),
        Rule("E3-003", WARNING, _E3, "stage outside any pipeline",
             "Pipeline stages are declared as part of an ordered pipeline.",
             frozenset({"pipelines"})),
        Rule("E4-001", WARNING, _E4, "ML model missing concern matrix rows",
             "Every ML model is a row of the responsible-AI concern matrix, with cells for "
             "fairness, explainability, human oversight, privacy and safety.",
             frozenset({"concern_matrix"})),
        Rule("E4-002", ERROR, _E4, "incomplete concern cell",
             "A concern matrix cell documents the metric or method, the monitoring frequency and "
             "the responsible party."),
        Rule("E5-001", ERROR, _E5, "accepted AI-ADR missing an AI field",
             "Accepted AI decision records fill all seven AI-specific fields: model alternatives, "
             "dataset, fairness/bias, model lifetime, retraining trigger, explainability and "
             "regulatory classification."),
        Rule("E5-002", ERROR, _E5, "AI-ADR missing a MADR field",
             "AI decision records keep the standard MADR fields: title, status, context, decision "
             "and consequences."),
        Rule("E6-001", ERROR, _E6, "scenario stimulus without a quantified trigger",
             "AI quality scenarios state their stimulus with a measurable trigger such as "
             "'shift > 2 sigma for 12 hours'."),
        Rule("E6-002", ERROR, _E6, "scenario without a response deadline",
             "AI quality scenarios give a measurable response with a deadline."),
        Rule("E6-003", ERROR, _E6, "scenario missing source, environment or response",
             "Scenarios follow the source-stimulus-environment-response form."),
        Rule("E7-001", ERROR, _E7, "invalid debt category",
             "Debt entries use one of the ML debt categories: boundary erosion, entanglement, "
             "hidden feedback loop, data dependency, pipeline debt."),
        Rule("E7-002", ERROR, _E7, "debt names an unknown component",
             "Components affected by a debt entry must be declared elements, stages or models.",
             ANY),
        Rule("E7-003", ERROR, _E7, "debt entry missing a field",
             "Debt entries record affected components, severity, remediation effort, owner and status."),
        Rule("E8-001", ERROR, _E8, "operational AI view missing a subsection",
             "The operational AI view has four required subsections: monitoring, retraining "
             "policy, deployment strategy and rollback policy."),
        Rule("E8-002", ERROR, _E8, "traffic split over 100%",
             "Deployment traffic split shares must not add up to more than 100 percent."),
        Rule("C4-001", ERROR, _C4E1, "unknown stereotype",
             "Elements use the five AI stereotypes: ML Model, Data Pipeline, Feature Store, "
             "Monitor, Human-in-the-Loop."),
        Rule("C4-002", ERROR, _C4E2, "lineage edge endpoint unresolved",
             "Both ends of a lineage edge must be declared elements or pipeline stages.",
             ANY),
        Rule("C4-003", ERROR, _C4E3, "non-deterministic element on the boundary without a region contract",
             "A non-deterministic element touching the region boundary carries a region contract "
             "(confidence specification, fallback strategy, degradation profile)."),
        Rule("C4-004", ERROR, _C4E3, "incomplete region contract",
             "A region contract states confidence, fallback and degradation."),
        Rule("L-001", WARNING, f"{_C4E2} together with {_E7}", "lineage cycle not registered as debt",
             "A cycle in the data lineage graph is a hidden feedback loop: outputs re-enter the "
             "data they were trained on. Register it in the E7 AI Debt Register with category "
             "hidden_feedback_loop covering at least one component on the cycle.",
             frozenset({"debts"})),
        Rule("X-001", ERROR, "document integrity", "dangling reference",
             "Every identifier used in the documentation must be declared somewhere in it.",
             ANY),
        Rule("X-002", ERROR, "document integrity", "duplicate identifier",
             "Identifiers are unique across the document; a model may appear once per version."),
        Rule("X-003", WARNING, "document integrity", "unknown key",
             "The key is not part of this block kind and is ignored."),
    )
}


class UnknownRuleError(KeyError):
    pass


def explain(rule_id: str) -> str:
    try:
        rule = RULES[rule_id]
    except KeyError:
        raise UnknownRuleError(f"unknown rule {rule_id!r}") from None
    return f"{rule.rule_id} ({rule.severity.value}): {rule.summary}. Enforces {rule.extension}. {rule.explanation}"


@dataclass(frozen=True)
class LintProfile:
    name: str
    enabled_rules: frozenset[str]


def _family(*prefixes: str) -> frozenset[str]:
    return frozenset(r for r in RULES if r.split("-")[0] in prefixes)


_STAGE1 = _family("E1", "E2", "X")
_STAGE2 = _STAGE1 | _family("E5", "E6")
_STAGE3 = _STAGE2 | _family("E7", "E8")

PROFILES: dict[str, LintProfile] = {
    "stage1": LintProfile("stage1", _STAGE1),
    "stage2": LintProfile("stage2", _STAGE2),
    "stage3": LintProfile("stage3", _STAGE3),
    "full": LintProfile("full", frozenset(RULES)),
}


# ---------------------------------------------------------------------------
# Checks. Each yields diagnostics; ``lint`` filters by profile and sorts.

_QUANTITY_RE = re.compile(r"(?:[<>≤≥]=?|=)\s*[-+]?\d|(?<![A-Za-z_0-9.])[-+]?\d+(?:\.\d+)?")


def has_quantified_trigger(text: str) -> bool:
    return bool(_QUANTITY_RE.search(text))


def _diag(rule_id: str, message: str, span, subject: str) -> Diagnostic:
    return Diagnostic(rule_id, RULES[rule_id].severity, message, span, subject)


def _check_boundaries(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    for b in doc.boundaries:
        missing = b.missing_parts()
        if missing:
            yield _diag("E1-002", f"boundary contract {b.key!r} lacks {', '.join(missing)}", b.span, b.key)
        if b.consumer is None or b.provider is None:
            absent = [n for n in ("consumer", "provider") if getattr(b, n) is None]
            yield _diag("E1-003", f"boundary contract {b.key!r} lacks {' and '.join(absent)}", b.span, b.key)
            continue
        if b.consumer in g.nodes and not g.determinism[b.consumer]:
            yield _diag("E1-003", f"consumer {b.consumer!r} is not in the deterministic region", b.span_of("consumer"), b.key)
        if b.provider in g.nodes and g.determinism[b.provider]:
            yield _diag("E1-003", f"provider {b.provider!r} is not on the AI side", b.span_of("provider"), b.key)
    covered = {frozenset((b.consumer, b.provider)) for b in doc.boundaries if b.consumer and b.provider}
    for a, z in boundary_crossings(g):
        if frozenset((a, z)) not in covered:
            edge = g.edges[(a, z)]
            span = edge.span if edge is not None else _stage_span(doc, a, z)
            yield _diag("E1-001", f"edge {a} -> {z} crosses the determinism boundary without a contract", span, f"{a}->{z}")


def _stage_span(doc: Document, *ids: str):
    for i in ids:
        if i in doc.stage_map:
            return doc.stage_map[i].span
    return None


def _check_models(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    for m in doc.models:
        missing = [f for f in ModelEntry.REQUIRED if getattr(m, f) in (None, "")]
        if missing:
            yield _diag("E2-001", f"model {m.key!r} lacks {', '.join(missing)}", m.span, m.key)
        if m.dataset_hash and not HEX_RE.match(m.dataset_hash):
            yield _diag("E2-002", f"dataset hash {m.dataset_hash!r} is not 8-64 lowercase hex digits", m.span_of("dataset_hash"), m.key)


def _check_pipelines(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    listed = {s for p in doc.pipelines for s in p.stages}
    for s in doc.stages:
        if not s.gates:
            yield _diag("E3-001", f"stage {s.key!r} has no quality gates", s.span, s.key)
        for n, gate in enumerate(s.gates, start=1):
            missing = gate.missing_parts()
            if missing:
                yield _diag("E3-002", f"gate {n} of stage {s.key!r} lacks {', '.join(missing)}", s.span_of("gates"), s.key)
        if s.stage_id not in listed:
            yield _diag("E3-003", f"stage {s.key!r} is not listed in any pipeline", s.span, s.key)


def _check_concerns(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    for el in doc.ml_models():
        have = {c.concern for c in doc.concern_matrix if c.component == el.element_id}
        missing = [c.value for c in Concern if c not in have]
        if missing:
            yield _diag("E4-001", f"ML model {el.key!r} has no concern rows for {', '.join(missing)}", el.span, el.key)
    for c in doc.concern_matrix:
        missing = [n for n in ("method", "monitoring_frequency", "owner") if getattr(c, n) in (None, "")]
        if missing:
            yield _diag("E4-002", f"concern cell {c.key!r} lacks {', '.join(missing)}", c.span, c.key)


def _check_adrs(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    for adr in doc.adrs:
        missing_madr = [n for n in AIADR.MADR_FIELDS if getattr(adr, n) in (None, "")]
        if missing_madr:
            yield _diag("E5-002", f"AI-ADR {adr.key!r} lacks {', '.join(missing_madr)}", adr.span, adr.key)
        if adr.status is ADRStatus.ACCEPTED:
            for name in adr.missing_ai_fields():
                yield _diag("E5-001", f"accepted AI-ADR {adr.key!r} lacks the {name} field", adr.span, adr.key)


def _check_scenarios(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    for sc in doc.scenarios:
        if not sc.stimulus or not has_quantified_trigger(sc.stimulus):
            yield _diag("E6-001", f"scenario {sc.key!r} has no quantified trigger in its stimulus", sc.span_of("stimulus"), sc.key)
        if sc.response_deadline is None:
            yield _diag("E6-002", f"scenario {sc.key!r} has no response_deadline", sc.span, sc.key)
        missing = [n for n in ("source", "environment", "response") if getattr(sc, n) in (None, "")]
        if missing:
            yield _diag("E6-003", f"scenario {sc.key!r} lacks {', '.join(missing)}", sc.span, sc.key)


def _check_debts(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    for d in doc.debts:
        if not isinstance(d.category, DebtCategory):
            yield _diag("E7-001", f"debt {d.key!r} has no valid category", d.span, d.key)
        missing = [] if d.components else ["components"]
        missing += [n for n in ("severity", "effort", "owner", "status") if getattr(d, n) in (None, "")]
        if missing:
            yield _diag("E7-003", f"debt {d.key!r} lacks {', '.join(missing)}", d.span, d.key)


def _check_ops(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    ops = doc.ops_view
    if ops is None:
        return
    problems = [] if ops.monitoring else ["monitoring"]
    for name in ("retraining", "deployment", "rollback"):
        part = getattr(ops, name)
        if part is None:
            problems.append(name)
        else:
            problems += [f"{name}.{p}" for p in part.missing_parts()]
    if problems:
        yield _diag("E8-001", f"operational AI view lacks {', '.join(problems)}", ops.span, "ops")
    if ops.deployment is not None:
        total = sum(s.percent for s in ops.deployment.traffic_split)
        if total > 100 + 1e-9:
            yield _diag("E8-002", f"traffic split adds up to {total:g}%", ops.span_of("deployment.traffic_split"), "ops")


def _check_elements(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    for el in doc.elements:
        if el.stereotype is not None and not isinstance(el.stereotype, Stereotype):
            yield _diag("C4-001", f"element {el.key!r} has unknown stereotype {el.stereotype!r}", el.span, el.key)
        if el.region_contract is not None and el.region_contract.missing_parts():
            missing = ", ".join(el.region_contract.missing_parts())
            yield _diag("C4-004", f"region contract of {el.key!r} lacks {missing}", el.span, el.key)
    on_boundary = {n for edge in boundary_crossings(g) for n in edge}
    for el in doc.elements:
        if el.element_id in on_boundary and not el.deterministic and el.region_contract is None:
            yield _diag("C4-003", f"non-deterministic element {el.key!r} sits on the region boundary without a region contract", el.span, el.key)


def _check_cycles(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    registered = {c for d in doc.debts if d.category is DebtCategory.HIDDEN_FEEDBACK_LOOP for c in d.components}
    for cycle in cycles(g):
        if registered.isdisjoint(cycle):
            path = "->".join([*cycle, cycle[0]])
            edge = g.edges[(cycle[0], cycle[1 % len(cycle)])]
            span = edge.span if edge is not None else _stage_span(doc, *cycle)
            yield _diag("L-001", f"lineage cycle {path} is not registered as hidden_feedback_loop debt", span, path)


def _check_integrity(doc: Document, g: LineageGraph) -> Iterator[Diagnostic]:
    yield from duplicate_diagnostics(doc)
    for ref in dangling(doc):
        yield _diag(ref.rule_id, f"{ref.site} refers to undeclared identifier {ref.target!r}", ref.span, ref.subject)
    for k in doc.unknown_keys:
        yield _diag("X-003", f"unknown key {k.key!r} in {k.kind} block", k.span, k.subject)


CHECKS: tuple[Callable[[Document, LineageGraph], Iterator[Diagnostic]], ...] = (
    _check_boundaries,
    _check_models,
    _check_pipelines,
    _check_concerns,
    _check_adrs,
    _check_scenarios,
    _check_debts,
    _check_ops,
    _check_elements,
    _check_cycles,
    _check_integrity,
)


def lint(doc: Document, profile: str | LintProfile = "full") -> list[Diagnostic]:
    """All findings of the rules enabled by ``profile``, ordered by file, line and rule id.

    Works on unresolved documents as well: reference problems surface as
    X-001 or the rule specific to the referencing site.
    """
    if isinstance(profile, str):
        try:
            profile = PROFILES[profile]
        except KeyError:
            raise ValueError(f"unknown lint profile {profile!r}; choose from {', '.join(PROFILES)}") from None
    g = build_graph(doc)
    found = {d for check in CHECKS for d in check(doc, g) if d.rule_id in profile.enabled_rules}
    return sorted(found, key=Diagnostic.sort_key)
