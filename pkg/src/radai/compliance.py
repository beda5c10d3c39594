"""EU AI Act Annex IV addressability scoring and AI concern coverage.

Two scoring modes share one report type. Profile mode returns fixed modal
ratings for four documentation configurations. Document mode inspects a
concrete document: a category is fully addressable (2) when every mapped
artifact kind is present and free of errors, partially addressable (1)
when at least one is present, and not addressable (0) otherwise.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from statistics import fmean, pstdev
from typing import Callable, Sequence

from radai.diagnostics import Severity
from radai.lineage import boundary_crossings, build_graph, impact
from radai.lint import lint
from radai.model import (
    AI_STEREOTYPES,
    AttachmentKind,
    Concern,
    DeploymentStrategy,
    Document,
    Stereotype,
)

SCORE_VALUES = (0, 1, 2)
MAX_TOTAL = 20


@dataclass(frozen=True)
class AnnexCategory:
    index: int
    name: str
    mapped_artifacts: tuple[str, ...]


# Artifact kinds: "s<n>" is base arc42 section n, "E<n>" an arc42 extension,
# "C4-E<n>" a C4 extension, "HitL" a Human-in-the-Loop element and
# "supplementary" an attachment of kind supplementary_training.
CATEGORIES: tuple[AnnexCategory, ...] = (
    AnnexCategory(1, "General system description", ("s1", "s3", "E1")),
    AnnexCategory(2, "System elements & development process", ("s5", "E2")),
    AnnexCategory(3, "Design specifications & architecture", ("s5", "s6", "s7", "C4-E1")),
    AnnexCategory(4, "Data & data governance", ("E3", "C4-E2")),
    AnnexCategory(5, "Training methodologies & techniques", ("E5",)),
    AnnexCategory(6, "Risk assessment & management", ("s11", "E7")),
    AnnexCategory(7, "Lifecycle change description", ("E2", "E8")),
    AnnexCategory(8, "Performance metrics & accuracy", ("E6", "C4-E3")),
    AnnexCategory(9, "Human oversight measures", ("E4", "HitL")),
    AnnexCategory(10, "Post-market monitoring", ("E8",)),
)
TRAINING_CATEGORY = 5
SUPPLEMENTARY = "supplementary"

# Modal ratings across practitioners, one column per configuration.
PROFILE_SCORES: dict[str, tuple[int, ...]] = {
    "std_arc42": (2, 1, 1, 0, 0, 1, 1, 0, 0, 1),
    "std_c4": (1, 1, 1, 0, 0, 0, 1, 1, 0, 0),
    "radai_arc42": (2, 2, 2, 2, 1, 2, 2, 2, 2, 2),
    "radai_c4": (2, 2, 2, 1, 1, 1, 2, 2, 1, 1),
}


def percent_of(total: int | float | Fraction) -> int:
    """100 * total / 20, rounded half-up to an integer."""
    exact = Fraction(repr(total)) if isinstance(total, float) else Fraction(total)
    return math.floor(exact * 100 / MAX_TOTAL + Fraction(1, 2))


@dataclass(frozen=True)
class CategoryScore:
    index: int
    name: str
    score: int
    missing: tuple[str, ...] = ()


@dataclass(frozen=True)
class ComplianceReport:
    mode: str
    basis: str
    categories: tuple[CategoryScore, ...]
    raters: RaterSummary | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("profile", "document"):
            raise ValueError(f"unknown report mode {self.mode!r}")
        if len(self.categories) != len(CATEGORIES):
            raise ValueError("a report scores exactly ten categories")
        if any(c.score not in SCORE_VALUES for c in self.categories):
            raise ValueError("category scores are 0, 1 or 2")

    @property
    def per_category(self) -> list[int]:
        return [c.score for c in self.categories]

    @property
    def total(self) -> int:
        return sum(self.per_category)

    @property
    def addressability_percent(self) -> int:
        return percent_of(self.total)

    @property
    def gaps(self) -> list[tuple[int, tuple[str, ...]]]:
        return [(c.index, c.missing) for c in self.categories if c.missing]

    def with_raters(self, summary: RaterSummary) -> ComplianceReport:
        return replace(self, raters=summary)

    def to_json(self) -> dict:
        out: dict = {
            "mode": self.mode,
            "basis": self.basis,
            "categories": [
                {"index": c.index, "name": c.name, "score": c.score, "missing": list(c.missing)}
                for c in self.categories
            ],
            "total": self.total,
            "percent": self.addressability_percent,
        }
        if self.raters is not None:
            out["raters"] = self.raters.to_json()
        return out


def score_profile(profile: str) -> ComplianceReport:
    """Fixed modal ratings for a documentation configuration."""
    try:
        scores = PROFILE_SCORES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}; choose from {', '.join(PROFILE_SCORES)}") from None
    return ComplianceReport(
        "profile",
        "modal",
        tuple(CategoryScore(c.index, c.name, s) for c, s in zip(CATEGORIES, scores)),
    )


# Rules that judge an artifact instance purely by its own content. Only
# these decide whether a present artifact is clean, which keeps document
# scores monotone when unrelated artifacts are added.
INTRINSIC_RULES = {
    "E1": {"E1-002"},
    "E2": {"E2-001", "E2-002"},
    "E3": {"E3-002"},
    "E4": {"E4-002"},
    "E5": {"E5-001", "E5-002"},
    "E6": {"E6-001", "E6-002", "E6-003"},
    "E7": {"E7-001", "E7-003"},
    "E8": {"E8-001", "E8-002"},
    "C4-E3": {"C4-004"},
}


def artifact_instances(doc: Document) -> dict[str, list[str]]:
    """Subject keys of every instance of each artifact kind."""
    out: dict[str, list[str]] = {f"s{n}": [f"s{n}"] for n in sorted(doc.base_sections)}
    out["E1"] = [b.key for b in doc.boundaries]
    out["E2"] = [m.key for m in doc.models]
    out["E3"] = [s.key for s in doc.stages]
    out["E4"] = [c.key for c in doc.concern_matrix]
    out["E5"] = [a.key for a in doc.adrs]
    out["E6"] = [s.key for s in doc.scenarios]
    out["E7"] = [d.key for d in doc.debts]
    out["E8"] = ["ops"] if doc.ops_view is not None else []
    out["C4-E1"] = [e.key for e in doc.elements if e.stereotype is not None]
    out["C4-E2"] = [e.key for e in doc.lineage_edges]
    out["C4-E3"] = [e.key for e in doc.elements if not e.deterministic and e.region_contract is not None]
    out["HitL"] = [e.key for e in doc.elements if e.stereotype is Stereotype.HUMAN_IN_THE_LOOP]
    out[SUPPLEMENTARY] = [a.key for a in doc.attachments if a.kind is AttachmentKind.SUPPLEMENTARY_TRAINING]
    return {k: v for k, v in out.items() if v}


def addressed_kinds(doc: Document) -> tuple[set[str], set[str]]:
    """(present kinds, kinds with at least one error-free instance)."""
    instances = artifact_instances(doc)
    flagged: dict[str, set[str]] = {}
    for d in lint(doc):
        if d.severity is Severity.ERROR:
            for kind, rules in INTRINSIC_RULES.items():
                if d.rule_id in rules:
                    flagged.setdefault(kind, set()).add(d.subject)
    clean = {k for k, keys in instances.items() if any(key not in flagged.get(k, ()) for key in keys)}
    return set(instances), clean


def score_document(doc: Document) -> ComplianceReport:
    present, clean = addressed_kinds(doc)
    scored = []
    for cat in CATEGORIES:
        missing = [k for k in cat.mapped_artifacts if k not in clean]
        if not missing:
            score = 2
        elif any(k in present for k in cat.mapped_artifacts):
            score = 1
        else:
            score = 0
        if cat.index == TRAINING_CATEGORY and SUPPLEMENTARY not in present:
            score = min(score, 1)
            missing.append(SUPPLEMENTARY)
        scored.append(CategoryScore(cat.index, cat.name, score, tuple(missing)))
    return ComplianceReport("document", "presence", tuple(scored))


# ---------------------------------------------------------------------------
# Multi-rater aggregation


@dataclass(frozen=True)
class RaterMatrix:
    """Ratings indexed [item][rater], each 0, 1 or 2."""

    ratings: tuple[tuple[int, ...], ...]
    rater_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.ratings)
        object.__setattr__(self, "ratings", rows)
        if not rows:
            raise ValueError("a rater matrix needs at least one item")
        width = len(rows[0])
        if width < 2:
            raise ValueError("a rater matrix needs at least two raters")
        if any(len(r) != width for r in rows):
            raise ValueError("every item must be rated by every rater")
        if any(type(v) is not int or v not in SCORE_VALUES for r in rows for v in r):
            raise ValueError("ratings are 0, 1 or 2")
        ids = tuple(self.rater_ids) or tuple(f"r{i + 1}" for i in range(width))
        if len(ids) != width:
            raise ValueError("one rater id per column")
        object.__setattr__(self, "rater_ids", ids)

    @property
    def items(self) -> int:
        return len(self.ratings)

    @property
    def raters(self) -> int:
        return len(self.ratings[0])


@dataclass(frozen=True)
class KappaResult:
    value: float
    degenerate: bool = False

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class RaterSummary:
    mean_total: float
    stddev_total: float
    modal_per_item: tuple[int, ...]
    kappa: KappaResult | None = None

    @property
    def mean_percent(self) -> int:
        return percent_of(self.mean_total)

    def to_json(self) -> dict:
        out = {
            "basis": "mean",
            "mean_total": self.mean_total,
            "stddev_total": self.stddev_total,
            "mean_percent": self.mean_percent,
            "modal_per_item": list(self.modal_per_item),
        }
        if self.kappa is not None:
            out["fleiss_kappa"] = self.kappa.value
            out["kappa_degenerate"] = self.kappa.degenerate
        return out


def _mode(values: Sequence[int]) -> int:
    counts = Counter(values)
    top = max(counts.values())
    return min(v for v, n in counts.items() if n == top)


def aggregate_raters(m: RaterMatrix) -> RaterSummary:
    """Per-rater totals (mean, population stddev) and per-item modes.

    Ties between modes resolve to the lower score.
    """
    totals = [sum(row[j] for row in m.ratings) for j in range(m.raters)]
    return RaterSummary(
        mean_total=fmean(totals),
        stddev_total=pstdev(totals),
        modal_per_item=tuple(_mode(row) for row in m.ratings),
        kappa=fleiss_kappa(m),
    )


def fleiss_kappa(m: RaterMatrix) -> KappaResult:
    """Fleiss' kappa over the three rating categories, computed exactly.

    When chance agreement is 1 (every rating identical) the statistic is
    undefined; 1 is returned with ``degenerate`` set.
    """
    n, r = m.items, m.raters
    counts = [Counter(row) for row in m.ratings]
    p_bar = sum(Fraction(sum(c * c for c in cnt.values()) - r, r * (r - 1)) for cnt in counts) / n
    p_e = sum(Fraction(sum(cnt[k] for cnt in counts), n * r) ** 2 for k in SCORE_VALUES)
    if p_e == 1:
        return KappaResult(1.0, degenerate=True)
    return KappaResult(float((p_bar - p_e) / (1 - p_e)))


# ---------------------------------------------------------------------------
# AI concern coverage

FULL, PARTIAL, NONE = "full", "partial", "none"
STATUS_ORDER = {NONE: 0, PARTIAL: 1, FULL: 2}


@dataclass(frozen=True)
class ConcernStatus:
    concern: str
    status: str


def mask_extensions(doc: Document) -> Document:
    """What the document would say with standard arc42/C4 only.

    Extension artifacts are dropped; elements keep their names but lose
    stereotypes, risk classes and region contracts and count as ordinary
    deterministic building blocks; lineage edges become plain relations.
    """
    return doc.replace(
        boundaries=(),
        models=(),
        pipelines=(),
        stages=(),
        concern_matrix=(),
        adrs=(),
        scenarios=(),
        debts=(),
        ops_view=None,
        attachments=(),
        unknown_keys=(),
        elements=tuple(
            replace(e, stereotype=None, risk_class=None, region_contract=None, deterministic=True) for e in doc.elements
        ),
        lineage_edges=tuple(replace(e, schema_note=None, freshness=None, privacy_class=None) for e in doc.lineage_edges),
    )


def _model_versioning(doc: Document) -> str:
    if doc.models:
        return FULL
    return PARTIAL if doc.ml_models() else NONE


def _feature_store(doc: Document) -> str:
    return FULL if any(e.stereotype is Stereotype.FEATURE_STORE for e in doc.elements) else NONE


def _pipeline(doc: Document) -> str:
    if doc.stages and all(s.gates for s in doc.stages):
        return FULL
    return PARTIAL if doc.stages or 6 in doc.base_sections else NONE


def _drift(doc: Document) -> str:
    return FULL if doc.ops_view is not None and doc.ops_view.monitoring else NONE


def _retraining(doc: Document) -> str:
    if doc.ops_view is not None and doc.ops_view.retraining is not None:
        return FULL
    return PARTIAL if any(a.retraining_trigger for a in doc.adrs) else NONE


def _non_determinism(doc: Document) -> str:
    crossings = boundary_crossings(build_graph(doc))
    covered = {frozenset((b.consumer, b.provider)) for b in doc.boundaries}
    if doc.boundaries and all(frozenset(edge) in covered for edge in crossings):
        return FULL
    return PARTIAL if doc.boundaries or any(not e.deterministic for e in doc.elements) else NONE


def _ab_canary(doc: Document) -> str:
    dep = doc.ops_view.deployment if doc.ops_view is not None else None
    if dep is None or dep.strategy is None:
        return NONE
    if dep.strategy in (DeploymentStrategy.CANARY, DeploymentStrategy.SHADOW) and dep.traffic_split:
        return FULL
    return PARTIAL


def _lineage(doc: Document) -> str:
    if any(e.annotated for e in doc.lineage_edges):
        return FULL
    return PARTIAL if doc.lineage_edges else NONE


def _debt(doc: Document) -> str:
    if not doc.debts:
        return NONE
    g = build_graph(doc)
    radius: set[str] = set()
    for d in doc.debts:
        for c in d.components:
            radius.add(c)
            if c in g.nodes:
                radius.update(impact(g, c))
    return FULL if all(e.element_id in radius for e in doc.ml_models()) else PARTIAL


def _responsible_ai(doc: Document) -> str:
    if not doc.concern_matrix:
        return NONE
    covered: dict[str, set[Concern]] = {}
    for c in doc.concern_matrix:
        covered.setdefault(c.component, set()).add(c.concern)
    ai = [e for e in doc.elements if e.stereotype in AI_STEREOTYPES and not e.deterministic]
    if ai and all(covered.get(e.element_id, set()) >= set(Concern) for e in ai):
        return FULL
    return PARTIAL


CONCERNS: tuple[tuple[str, Callable[[Document], str]], ...] = (
    ("Model versioning & lifecycle management", _model_versioning),
    ("Feature store architecture & sharing", _feature_store),
    ("Data pipeline with quality gates", _pipeline),
    ("Drift detection & monitoring", _drift),
    ("Retraining triggers & automation", _retraining),
    ("Non-deterministic behavior boundaries", _non_determinism),
    ("A/B testing / canary model deployment", _ab_canary),
    ("Data lineage & provenance", _lineage),
    ("ML-specific technical debt tracking", _debt),
    ("Responsible AI / fairness concerns", _responsible_ai),
)
COVERAGE_PROFILES = ("standard", "radai")


def concern_coverage(doc: Document, profile: str = "radai") -> list[ConcernStatus]:
    if profile not in COVERAGE_PROFILES:
        raise ValueError(f"unknown coverage profile {profile!r}; choose from {', '.join(COVERAGE_PROFILES)}")
    view = mask_extensions(doc) if profile == "standard" else doc
    return [ConcernStatus(name, rule(view)) for name, rule in CONCERNS]


def coverage_counts(statuses: Sequence[ConcernStatus]) -> tuple[int, int]:
    """(fully captured, partially captured)."""
    return (
        sum(s.status == FULL for s in statuses),
        sum(s.status == PARTIAL for s in statuses),
    )
