"""Cross-reference resolution for a parsed document."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from radai.diagnostics import Diagnostic, Severity, SourceSpan
from radai.model import Document


@dataclass(frozen=True)
class Reference:
    """One identifier used somewhere in the document."""

    subject: str
    site: str
    target: str
    scope: str
    span: SourceSpan | None
    rule_id: str = "X-001"


def scopes(doc: Document) -> dict[str, frozenset[str]]:
    elements = frozenset(e.element_id for e in doc.elements)
    stages = frozenset(s.stage_id for s in doc.stages)
    models = frozenset(m.model_id for m in doc.models)
    return {
        "node": elements | stages,
        "component": elements | stages | models,
        "model": models | elements,
        "stage": stages,
        "attachment": frozenset(a.attachment_id for a in doc.attachments),
    }


def references(doc: Document) -> Iterator[Reference]:
    """Every identifier reference, with the scope it must resolve in.

    Rule ids name the specialised lint rule for that site; plain resolution
    reports all of them as X-001.
    """
    for b in doc.boundaries:
        for site in ("consumer", "provider"):
            target = getattr(b, site)
            if target is not None:
                yield Reference(b.key, f"boundary {site}", target, "node", b.span_of(site))
    for m in doc.models:
        if m.lineage_ref is not None:
            yield Reference(m.key, "model lineage_ref", m.lineage_ref, "node", m.span_of("lineage_ref"), "E2-003")
        for site in ("hyperparams", "model_card"):
            target = getattr(m, site)
            if target is not None:
                yield Reference(m.key, f"model {site}", target, "attachment", m.span_of(site))
    for p in doc.pipelines:
        for target in p.stages:
            yield Reference(p.key, "pipeline stages", target, "stage", p.span_of("stages"))
        for target in p.data_cards:
            yield Reference(p.key, "pipeline data_cards", target, "attachment", p.span_of("data_cards"))
    for s in doc.stages:
        for site in ("reads_from", "writes_to"):
            for target in getattr(s, site):
                yield Reference(s.key, f"stage {site}", target, "node", s.span_of(site))
    for c in doc.concern_matrix:
        yield Reference(c.key, "concern component", c.component, "node", c.span_of("component"))
    for d in doc.debts:
        for target in d.components:
            yield Reference(d.key, "debt components", target, "component", d.span_of("components"), "E7-002")
    if doc.ops_view is not None:
        for entry in doc.ops_view.monitoring:
            yield Reference("ops", "monitoring model", entry.model_id, "model", doc.ops_view.span_of("monitoring"))
    for e in doc.lineage_edges:
        for site, target in (("from", e.source), ("to", e.target)):
            yield Reference(e.key, f"lineage {site}", target, "node", e.span_of(site), "C4-002")


def dangling(doc: Document) -> list[Reference]:
    known = scopes(doc)
    return [r for r in references(doc) if r.target not in known[r.scope]]


def duplicate_diagnostics(doc: Document) -> list[Diagnostic]:
    """X-002 for every identifier declared more than once.

    Identifiers are unique across all entity kinds. A model may be registered
    under several versions but each (model, version) pair only once.
    """
    out: list[Diagnostic] = []
    seen: dict[str, str] = {}
    model_versions: set[tuple[str, str]] = set()

    def dup(subject: str, what: str, span: SourceSpan | None) -> None:
        out.append(Diagnostic("X-002", Severity.ERROR, f"duplicate {what} {subject!r}", span, subject))

    for name in ("boundaries", "models", "pipelines", "stages", "adrs", "scenarios", "debts", "elements", "attachments"):
        for entity in getattr(doc, name):
            key = entity.key
            kind = _KIND_NAMES[name]
            if name == "models":
                if entity.registry_key in model_versions:
                    dup(key, f"model version {entity.version or '<unversioned>'} of", entity.span)
                    continue
                model_versions.add(entity.registry_key)
                if seen.get(key) == "model":
                    continue
            if key in seen:
                dup(key, f"{kind} identifier (already declared as {seen[key]})", entity.span)
            else:
                seen[key] = kind
    for name, what in (("concern_matrix", "concern cell"), ("lineage_edges", "lineage edge")):
        keys: set[str] = set()
        for entity in getattr(doc, name):
            if entity.key in keys:
                dup(entity.key, what, entity.span)
            keys.add(entity.key)
    return out


_KIND_NAMES = {
    "boundaries": "boundary",
    "models": "model",
    "pipelines": "pipeline",
    "stages": "stage",
    "adrs": "adr",
    "scenarios": "scenario",
    "debts": "debt",
    "elements": "element",
    "attachments": "attachment",
}


class ResolutionError(Exception):
    """Raised with every X-001/X-002 finding when a document does not resolve."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__(f"{len(diagnostics)} unresolved reference(s) or duplicate identifier(s)")


def resolve_links(doc: Document) -> Document:
    """Return ``doc`` once every reference resolves; raise ``ResolutionError`` otherwise.

    Resolution never rewrites the document, so it is idempotent.
    """
    found = duplicate_diagnostics(doc)
    for ref in dangling(doc):
        found.append(
            Diagnostic(
                "X-001",
                Severity.ERROR,
                f"{ref.site} refers to undeclared identifier {ref.target!r}",
                ref.span,
                ref.subject,
            )
        )
    if found:
        raise ResolutionError(sorted(found, key=Diagnostic.sort_key))
    return doc


def entity_index(doc: Document) -> dict[str, str]:
    """Map each declared identifier to its entity kind.

    Elements report their stereotype, e.g. ``element(feature_store)``.
    """
    index: dict[str, str] = {}
    for name, kind in _KIND_NAMES.items():
        for entity in getattr(doc, name):
            if name == "elements" and entity.stereotype is not None:
                index[entity.key] = f"element({entity.stereotype.value})"
            else:
                index[entity.key] = kind
    return index
