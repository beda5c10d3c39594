"""In-memory model of one project's AI-extended architecture documentation.

Entities are frozen dataclasses. Enum fields are coerced from their string
values when an entity is built and anything outside the vocabulary raises
``VocabularyError``. Fields that good documentation must carry but an author
can still forget are ``Optional``: a missing value is a lint finding, not a
construction failure.

Source spans ride along on every entity but never take part in equality, so
a document re-read from its canonical serialization compares equal to the
original.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, replace
from datetime import date
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, TypeVar

from radai.diagnostics import SourceSpan

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9._-]*\Z")
HEX_RE = re.compile(r"[0-9a-f]{8,64}\Z")
_METRIC_RE = re.compile(r"[^\s<>=@|,≤≥\[\]\"]+\Z")
_UNIT_RE = re.compile(r"[^\s@|,\[\]\"]+\Z")


class VocabularyError(ValueError):
    """A value outside a closed vocabulary."""

    def __init__(self, name: str, value: object, allowed: Iterable[str]):
        self.name = name
        self.value = value
        self.allowed = tuple(allowed)
        super().__init__(f"{name}: {value!r} is not one of {', '.join(self.allowed)}")


class OutputType(str, Enum):
    CATEGORICAL = "categorical"
    CONTINUOUS = "continuous"
    GENERATIVE = "generative"


class Fallback(str, Enum):
    RULE_BASED_DEFAULT = "rule_based_default"
    CACHED_LAST_KNOWN_GOOD = "cached_last_known_good"
    HUMAN_ESCALATION = "human_escalation"


class Comparator(str, Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="


class ModelStatus(str, Enum):
    SHADOW = "shadow"
    CANARY = "canary"
    PRODUCTION = "production"


class StageKind(str, Enum):
    COLLECTION = "collection"
    PREPROCESSING = "preprocessing"
    FEATURE_ENGINEERING = "feature_engineering"
    TRAINING = "training"
    INFERENCE = "inference"
    FEEDBACK = "feedback"


class GateCheck(str, Enum):
    SCHEMA = "schema"
    DISTRIBUTION = "distribution"
    COMPLETENESS = "completeness"


class GateAction(str, Enum):
    HALT = "halt"
    ALERT_CONTINUE = "alert_continue"
    ACTIVATE_FALLBACK = "activate_fallback"


class Concern(str, Enum):
    FAIRNESS = "fairness"
    EXPLAINABILITY = "explainability"
    HUMAN_OVERSIGHT = "human_oversight"
    PRIVACY = "privacy"
    SAFETY = "safety"


class ADRStatus(str, Enum):
    PROPOSED = "proposed"
    ACCEPTED = "accepted"
    DEPRECATED = "deprecated"
    SUPERSEDED = "superseded"


class ScenarioSource(str, Enum):
    DATA_DRIFT = "data_drift"
    MODEL_STALENESS = "model_staleness"
    ADVERSARIAL_INPUT = "adversarial_input"
    OTHER = "other"


class ScenarioEnvironment(str, Enum):
    TRAINING = "training"
    SERVING = "serving"
    MONITORING = "monitoring"


class DebtCategory(str, Enum):
    BOUNDARY_EROSION = "boundary_erosion"
    ENTANGLEMENT = "entanglement"
    HIDDEN_FEEDBACK_LOOP = "hidden_feedback_loop"
    DATA_DEPENDENCY = "data_dependency"
    PIPELINE_DEBT = "pipeline_debt"


class DebtSeverity(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class DebtStatus(str, Enum):
    OPEN = "open"
    IN_PROGRESS = "in_progress"
    RESOLVED = "resolved"


class RetrainingTrigger(str, Enum):
    SCHEDULED = "scheduled"
    PERFORMANCE_BASED = "performance_based"
    DRIFT_BASED = "drift_based"


class Automation(str, Enum):
    MANUAL = "manual"
    SEMI_AUTOMATED = "semi_automated"
    FULLY_AUTOMATED = "fully_automated"


class DeploymentStrategy(str, Enum):
    CANARY = "canary"
    BLUE_GREEN = "blue_green"
    SHADOW = "shadow"


class Stereotype(str, Enum):
    ML_MODEL = "ml_model"
    DATA_PIPELINE = "data_pipeline"
    FEATURE_STORE = "feature_store"
    MONITOR = "monitor"
    HUMAN_IN_THE_LOOP = "human_in_the_loop"

    @property
    def label(self) -> str:
        return _STEREOTYPE_LABELS[self]


_STEREOTYPE_LABELS = {
    Stereotype.ML_MODEL: "ML Model",
    Stereotype.DATA_PIPELINE: "Data Pipeline",
    Stereotype.FEATURE_STORE: "Feature Store",
    Stereotype.MONITOR: "Monitor",
    Stereotype.HUMAN_IN_THE_LOOP: "Human-in-the-Loop",
}

# Stereotypes naming components whose behaviour is learned or data-driven.
AI_STEREOTYPES = frozenset(
    {Stereotype.ML_MODEL, Stereotype.DATA_PIPELINE, Stereotype.FEATURE_STORE, Stereotype.MONITOR}
)


class RiskClass(str, Enum):
    HIGH_RISK = "high_risk"
    LIMITED_RISK = "limited_risk"
    MINIMAL_RISK = "minimal_risk"

    @property
    def label(self) -> str:
        return self.value.replace("_", "-")


class PrivacyClass(str, Enum):
    PUBLIC = "public"
    INTERNAL = "internal"
    PERSONAL = "personal"
    SENSITIVE = "sensitive"


class AttachmentKind(str, Enum):
    MODEL_CARD = "model_card"
    DATA_CARD = "data_card"
    HYPERPARAMS = "hyperparams"
    SUPPLEMENTARY_TRAINING = "supplementary_training"
    OTHER = "other"


E = TypeVar("E", bound=Enum)


def coerce_enum(value: object, enum_cls: type[E], name: str) -> E | None:
    if value is None or isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        raise VocabularyError(name, value, (m.value for m in enum_cls)) from None


def check_ident(value: object, name: str) -> str:
    if not isinstance(value, str) or not IDENT_RE.match(value):
        raise ValueError(f"{name}: {value!r} is not a valid identifier")
    return value


def _opt_ident(value: object, name: str) -> str | None:
    return None if value is None else check_ident(value, name)


def _idents(values: Iterable[object], name: str) -> tuple[str, ...]:
    return tuple(check_ident(v, name) for v in values)


def _opt_text(value: object, name: str) -> str | None:
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValueError(f"{name}: expected text, got {type(value).__name__}")
    return value


def _set(obj: object, name: str, value: object) -> None:
    object.__setattr__(obj, name, value)


_DURATION_RE = re.compile(
    r"P(?:(\d+)Y)?(?:(\d+)M)?(?:(\d+)W)?(?:(\d+)D)?(?:T(?:(\d+)H)?(?:(\d+)M)?(?:(\d+)S)?)?\Z"
)
_DURATION_UNITS = (365 * 86400, 30 * 86400, 7 * 86400, 86400, 3600, 60, 1)


@dataclass(frozen=True, order=True)
class Duration:
    """A strictly positive span of time, kept in whole seconds.

    Years count as 365 days and months as 30 days.
    """

    seconds: int

    def __post_init__(self) -> None:
        if not isinstance(self.seconds, int) or isinstance(self.seconds, bool):
            raise ValueError("duration seconds must be an integer")
        if self.seconds <= 0:
            raise ValueError("duration must be positive")

    @classmethod
    def parse(cls, text: str) -> Duration:
        m = _DURATION_RE.match(text.strip())
        if not m or text.strip() in ("P", "") or text.strip().endswith("T"):
            raise ValueError(f"not an ISO-8601 duration: {text!r}")
        parts = m.groups()
        if all(p is None for p in parts):
            raise ValueError(f"not an ISO-8601 duration: {text!r}")
        total = sum(int(p) * unit for p, unit in zip(parts, _DURATION_UNITS) if p)
        return cls(total)

    def __str__(self) -> str:
        days, rest = divmod(self.seconds, 86400)
        hours, rest = divmod(rest, 3600)
        minutes, secs = divmod(rest, 60)
        out = "P" + (f"{days}D" if days else "")
        clock = "".join(f"{v}{u}" for v, u in ((hours, "H"), (minutes, "M"), (secs, "S")) if v)
        return out + ("T" + clock if clock else "")


def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


@dataclass(frozen=True)
class Located:
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)
    key_spans: Mapping[str, SourceSpan] = field(
        default_factory=dict, compare=False, repr=False, kw_only=True
    )

    def span_of(self, key: str) -> SourceSpan | None:
        return self.key_spans.get(key, self.span)


@dataclass(frozen=True)
class ConfidenceSpec:
    """``metric cmp value [unit] [@ condition]``, e.g. ``precision >= 0.92 @ P95 latency < 50 ms``."""

    metric: str
    comparator: Comparator
    value: float
    unit: str | None = None
    condition: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.metric, str) or not _METRIC_RE.match(self.metric):
            raise ValueError(f"metric: {self.metric!r} is not a single token")
        _set(self, "comparator", coerce_enum(self.comparator, Comparator, "comparator"))
        value = float(self.value)
        if not math.isfinite(value):
            raise ValueError("confidence value must be finite")
        _set(self, "value", value)
        if self.unit is not None and not _UNIT_RE.match(self.unit):
            raise ValueError(f"unit: {self.unit!r} is not a token")
        if self.condition is not None and (
            not self.condition.strip() or self.condition != self.condition.strip()
        ):
            raise ValueError("condition must be nonempty, trimmed text")

    def __str__(self) -> str:
        text = f"{self.metric} {self.comparator.value} {format_number(self.value)}"
        if self.unit:
            text += f" {self.unit}"
        if self.condition:
            text += f" @ {self.condition}"
        return text


@dataclass(frozen=True)
class BoundaryContract(Located):
    """Four-part contract on one deterministic/non-deterministic interface."""

    interface_id: str
    consumer: str | None = None
    provider: str | None = None
    output_type: OutputType | None = None
    confidence: ConfidenceSpec | None = None
    update_frequency: Duration | None = None
    fallback: Fallback | None = None
    fallback_note: str | None = None

    def __post_init__(self) -> None:
        check_ident(self.interface_id, "interface_id")
        _opt_ident(self.consumer, "consumer")
        _opt_ident(self.provider, "provider")
        _set(self, "output_type", coerce_enum(self.output_type, OutputType, "output_type"))
        _set(self, "fallback", coerce_enum(self.fallback, Fallback, "fallback"))

    @property
    def key(self) -> str:
        return self.interface_id

    def missing_parts(self) -> list[str]:
        return [
            name
            for name in ("output_type", "confidence", "update_frequency", "fallback")
            if getattr(self, name) is None
        ]


@dataclass(frozen=True)
class AttachmentRef(Located):
    """A linked sub-artifact such as a model card or data card."""

    attachment_id: str
    kind: AttachmentKind
    uri: str
    note: str | None = None

    def __post_init__(self) -> None:
        check_ident(self.attachment_id, "attachment_id")
        _set(self, "kind", coerce_enum(self.kind, AttachmentKind, "kind"))
        if self.kind is None:
            raise ValueError("attachment kind is required")
        if not isinstance(self.uri, str) or not self.uri:
            raise ValueError("attachment uri must be nonempty")
        if self.kind is AttachmentKind.OTHER and not self.note:
            raise ValueError("attachment of kind 'other' needs a note")

    @property
    def key(self) -> str:
        return self.attachment_id


@dataclass(frozen=True)
class ModelEntry(Located):
    model_id: str
    version: str | None = None
    framework: str | None = None
    dataset_hash: str | None = None
    lineage_ref: str | None = None
    hyperparams: str | None = None
    primary_metric: ConfidenceSpec | None = None
    status: ModelStatus | None = None
    owner: str | None = None
    last_retrained: date | None = None
    model_card: str | None = None

    REQUIRED = ("version", "framework", "dataset_hash", "primary_metric", "status", "owner", "last_retrained")

    def __post_init__(self) -> None:
        check_ident(self.model_id, "model_id")
        _opt_ident(self.lineage_ref, "lineage_ref")
        _opt_ident(self.hyperparams, "hyperparams")
        _opt_ident(self.model_card, "model_card")
        _set(self, "status", coerce_enum(self.status, ModelStatus, "status"))
        if self.last_retrained is not None and not isinstance(self.last_retrained, date):
            raise ValueError("last_retrained must be a date")

    @property
    def key(self) -> str:
        return self.model_id

    @property
    def registry_key(self) -> tuple[str, str]:
        return (self.model_id, self.version or "")


@dataclass(frozen=True)
class QualityGate:
    check: GateCheck | None = None
    threshold: ConfidenceSpec | None = None
    on_failure: GateAction | None = None

    def __post_init__(self) -> None:
        _set(self, "check", coerce_enum(self.check, GateCheck, "check"))
        _set(self, "on_failure", coerce_enum(self.on_failure, GateAction, "on_failure"))

    def missing_parts(self) -> list[str]:
        return [n for n in ("check", "threshold", "on_failure") if getattr(self, n) is None]


@dataclass(frozen=True)
class PipelineStage(Located):
    stage_id: str
    kind: StageKind
    gates: tuple[QualityGate, ...] = ()
    reads_from: tuple[str, ...] = ()
    writes_to: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        check_ident(self.stage_id, "stage_id")
        _set(self, "kind", coerce_enum(self.kind, StageKind, "kind"))
        if self.kind is None:
            raise ValueError("stage kind is required")
        _set(self, "gates", tuple(self.gates))
        _set(self, "reads_from", _idents(self.reads_from, "reads_from"))
        _set(self, "writes_to", _idents(self.writes_to, "writes_to"))

    @property
    def key(self) -> str:
        return self.stage_id


@dataclass(frozen=True)
class Pipeline(Located):
    """An ordered pipeline; stage bodies live in ``Document.stages``."""

    pipeline_id: str
    stages: tuple[str, ...]
    data_cards: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        check_ident(self.pipeline_id, "pipeline_id")
        stages = _idents(self.stages, "stages")
        if not stages:
            raise ValueError(f"pipeline {self.pipeline_id!r} has no stages")
        if len(set(stages)) != len(stages):
            raise ValueError(f"pipeline {self.pipeline_id!r} lists a stage twice")
        _set(self, "stages", stages)
        _set(self, "data_cards", _idents(self.data_cards, "data_cards"))

    @property
    def key(self) -> str:
        return self.pipeline_id


@dataclass(frozen=True)
class ConcernCell(Located):
    component: str
    concern: Concern
    method: str | None = None
    threshold: ConfidenceSpec | None = None
    monitoring_frequency: Duration | None = None
    owner: str | None = None

    def __post_init__(self) -> None:
        check_ident(self.component, "component")
        _set(self, "concern", coerce_enum(self.concern, Concern, "concern"))
        if self.concern is None:
            raise ValueError("concern is required")

    @property
    def key(self) -> str:
        return f"{self.component}/{self.concern.value}"


@dataclass(frozen=True)
class AIADR(Located):
    """MADR record extended with seven AI-specific fields."""

    adr_id: str
    title: str | None = None
    status: ADRStatus | None = None
    context: str | None = None
    decision: str | None = None
    consequences: str | None = None
    model_alternatives: tuple[str, ...] = ()
    dataset: str | None = None
    fairness_bias: str | None = None
    model_lifetime: str | None = None
    retraining_trigger: str | None = None
    explainability: str | None = None
    regulatory: str | None = None

    AI_FIELDS = (
        "model_alternatives",
        "dataset",
        "fairness_bias",
        "model_lifetime",
        "retraining_trigger",
        "explainability",
        "regulatory",
    )
    MADR_FIELDS = ("title", "status", "context", "decision", "consequences")

    def __post_init__(self) -> None:
        check_ident(self.adr_id, "adr_id")
        _set(self, "status", coerce_enum(self.status, ADRStatus, "status"))
        _set(self, "model_alternatives", tuple(self.model_alternatives))

    @property
    def key(self) -> str:
        return self.adr_id

    def missing_ai_fields(self) -> list[str]:
        return [name for name in self.AI_FIELDS if not getattr(self, name)]


@dataclass(frozen=True)
class QualityScenario(Located):
    scenario_id: str
    source: ScenarioSource | None = None
    source_note: str | None = None
    stimulus: str | None = None
    environment: ScenarioEnvironment | None = None
    response: str | None = None
    response_deadline: Duration | None = None

    def __post_init__(self) -> None:
        check_ident(self.scenario_id, "scenario_id")
        _set(self, "source", coerce_enum(self.source, ScenarioSource, "source"))
        _set(self, "environment", coerce_enum(self.environment, ScenarioEnvironment, "environment"))
        if self.source is ScenarioSource.OTHER and not self.source_note:
            raise ValueError("scenario source 'other' needs a source_note")

    @property
    def key(self) -> str:
        return self.scenario_id


@dataclass(frozen=True)
class DebtEntry(Located):
    debt_id: str
    category: DebtCategory | None = None
    components: tuple[str, ...] = ()
    severity: DebtSeverity | None = None
    effort: str | None = None
    owner: str | None = None
    status: DebtStatus | None = None

    def __post_init__(self) -> None:
        check_ident(self.debt_id, "debt_id")
        _set(self, "category", coerce_enum(self.category, DebtCategory, "category"))
        _set(self, "components", _idents(self.components, "components"))
        _set(self, "severity", coerce_enum(self.severity, DebtSeverity, "severity"))
        _set(self, "status", coerce_enum(self.status, DebtStatus, "status"))

    @property
    def key(self) -> str:
        return self.debt_id


@dataclass(frozen=True)
class MonitoringEntry:
    model_id: str
    metrics: tuple[str, ...]
    alert_threshold: ConfidenceSpec

    def __post_init__(self) -> None:
        check_ident(self.model_id, "model_id")
        metrics = tuple(self.metrics)
        if not metrics or not all(isinstance(m, str) and _METRIC_RE.match(m) for m in metrics):
            raise ValueError("monitoring needs at least one metric token")
        _set(self, "metrics", metrics)
        if not isinstance(self.alert_threshold, ConfidenceSpec):
            raise ValueError("monitoring needs an alert threshold")


@dataclass(frozen=True)
class RetrainingPolicy:
    triggers: tuple[RetrainingTrigger, ...] = ()
    automation: Automation | None = None
    approval: str | None = None

    def __post_init__(self) -> None:
        _set(self, "triggers", tuple(coerce_enum(t, RetrainingTrigger, "triggers") for t in self.triggers))
        _set(self, "automation", coerce_enum(self.automation, Automation, "automation"))

    def missing_parts(self) -> list[str]:
        out = [] if self.triggers else ["triggers"]
        return out + [n for n in ("automation", "approval") if getattr(self, n) is None]


@dataclass(frozen=True)
class TrafficShare:
    label: str
    percent: float

    def __post_init__(self) -> None:
        if not isinstance(self.label, str) or not self.label.strip() or self.label != self.label.strip():
            raise ValueError("traffic share label must be nonempty, trimmed text")
        percent = float(self.percent)
        if not 0.0 <= percent <= 100.0:
            raise ValueError(f"traffic share {percent} outside [0, 100]")
        _set(self, "percent", percent)


@dataclass(frozen=True)
class DeploymentPolicy:
    strategy: DeploymentStrategy | None = None
    promotion_criteria: str | None = None
    traffic_split: tuple[TrafficShare, ...] = ()

    def __post_init__(self) -> None:
        _set(self, "strategy", coerce_enum(self.strategy, DeploymentStrategy, "strategy"))
        _set(self, "traffic_split", tuple(self.traffic_split))

    def missing_parts(self) -> list[str]:
        return [n for n in ("strategy", "promotion_criteria") if getattr(self, n) is None]


@dataclass(frozen=True)
class RollbackPolicy:
    triggers: str | None = None
    retention_depth: int | None = None
    downstream_note: str | None = None

    def __post_init__(self) -> None:
        depth = self.retention_depth
        if depth is not None and (isinstance(depth, bool) or not isinstance(depth, int) or depth < 1):
            raise ValueError("retention_depth must be a positive integer")

    def missing_parts(self) -> list[str]:
        return [n for n in ("triggers", "retention_depth", "downstream_note") if getattr(self, n) is None]


@dataclass(frozen=True)
class OperationalAIView(Located):
    monitoring: tuple[MonitoringEntry, ...] = ()
    retraining: RetrainingPolicy | None = None
    deployment: DeploymentPolicy | None = None
    rollback: RollbackPolicy | None = None

    SUBSECTIONS = ("monitoring", "retraining", "deployment", "rollback")

    def __post_init__(self) -> None:
        _set(self, "monitoring", tuple(self.monitoring))

    @property
    def key(self) -> str:
        return "ops"


@dataclass(frozen=True)
class RegionContract:
    confidence: ConfidenceSpec | None = None
    fallback: str | None = None
    degradation: str | None = None

    def missing_parts(self) -> list[str]:
        return [n for n in ("confidence", "fallback", "degradation") if getattr(self, n) is None]


@dataclass(frozen=True)
class DiagramElement(Located):
    element_id: str
    name: str | None = None
    stereotype: Stereotype | None = None
    deterministic: bool = True
    risk_class: RiskClass | None = None
    region_contract: RegionContract | None = None

    def __post_init__(self) -> None:
        check_ident(self.element_id, "element_id")
        _set(self, "stereotype", coerce_enum(self.stereotype, Stereotype, "stereotype"))
        _set(self, "risk_class", coerce_enum(self.risk_class, RiskClass, "risk_class"))
        if not isinstance(self.deterministic, bool):
            raise ValueError("deterministic must be a boolean")
        if self.stereotype is Stereotype.ML_MODEL and self.deterministic:
            raise ValueError(f"element {self.element_id!r}: an ML model cannot be deterministic")

    @property
    def key(self) -> str:
        return self.element_id

    @property
    def display_name(self) -> str:
        return self.name or self.element_id


@dataclass(frozen=True)
class LineageEdge(Located):
    source: str
    target: str
    schema_note: str | None = None
    freshness: Duration | None = None
    privacy_class: PrivacyClass | None = None

    def __post_init__(self) -> None:
        check_ident(self.source, "from")
        check_ident(self.target, "to")
        if self.source == self.target:
            raise ValueError(f"lineage edge {self.source!r} points at itself")
        _set(self, "privacy_class", coerce_enum(self.privacy_class, PrivacyClass, "privacy"))

    @property
    def key(self) -> str:
        return f"{self.source}->{self.target}"

    @property
    def annotated(self) -> bool:
        return any(v is not None for v in (self.schema_note, self.freshness, self.privacy_class))

    @property
    def is_control(self) -> bool:
        return self.schema_note == "control"


@dataclass(frozen=True)
class UnknownKey:
    kind: str
    subject: str
    key: str
    span: SourceSpan | None = field(default=None, compare=False)


# Collections of the document, in canonical order, with their sort keys.
COLLECTIONS = (
    "boundaries",
    "models",
    "pipelines",
    "stages",
    "concern_matrix",
    "adrs",
    "scenarios",
    "debts",
    "elements",
    "lineage_edges",
    "attachments",
)


def sort_key(entity: object) -> tuple:
    if isinstance(entity, ModelEntry):
        return (*entity.registry_key, repr(entity))
    if isinstance(entity, ConcernCell):
        return (entity.component, entity.concern.value, repr(entity))
    if isinstance(entity, LineageEdge):
        return (entity.source, entity.target, repr(entity))
    return (entity.key, repr(entity))


@dataclass(frozen=True, eq=False)
class Document:
    """Everything one project documents, base arc42 sections included.

    Entity collections keep source order; equality ignores that order and
    all source spans.
    """

    project_id: str | None = None
    title: str | None = None
    base_sections: frozenset[int] = frozenset()
    boundaries: tuple[BoundaryContract, ...] = ()
    models: tuple[ModelEntry, ...] = ()
    pipelines: tuple[Pipeline, ...] = ()
    stages: tuple[PipelineStage, ...] = ()
    concern_matrix: tuple[ConcernCell, ...] = ()
    adrs: tuple[AIADR, ...] = ()
    scenarios: tuple[QualityScenario, ...] = ()
    debts: tuple[DebtEntry, ...] = ()
    ops_view: OperationalAIView | None = None
    elements: tuple[DiagramElement, ...] = ()
    lineage_edges: tuple[LineageEdge, ...] = ()
    attachments: tuple[AttachmentRef, ...] = ()
    unknown_keys: tuple[UnknownKey, ...] = ()
    meta_span: SourceSpan | None = None

    def __post_init__(self) -> None:
        _opt_ident(self.project_id, "project_id")
        if self.title is not None and self.project_id is None:
            raise ValueError("a document title needs a project_id")
        sections = frozenset(self.base_sections)
        if any(not isinstance(s, int) or not 1 <= s <= 12 for s in sections):
            raise ValueError("arc42 base sections are numbered 1..12")
        _set(self, "base_sections", sections)
        for name in COLLECTIONS:
            _set(self, name, tuple(getattr(self, name)))
        _set(self, "unknown_keys", tuple(self.unknown_keys))

    def canonical(self, name: str) -> list:
        return sorted(getattr(self, name), key=sort_key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return NotImplemented
        if (self.project_id, self.title, self.base_sections, self.ops_view) != (
            other.project_id,
            other.title,
            other.base_sections,
            other.ops_view,
        ):
            return False
        return all(self.canonical(n) == other.canonical(n) for n in COLLECTIONS)

    __hash__ = None  # type: ignore[assignment]

    def is_empty(self) -> bool:
        return (
            self.project_id is None
            and self.title is None
            and not self.base_sections
            and self.ops_view is None
            and not any(getattr(self, n) for n in COLLECTIONS)
        )

    def entities(self) -> Iterator[object]:
        for name in COLLECTIONS:
            yield from getattr(self, name)
        if self.ops_view is not None:
            yield self.ops_view

    @cached_property
    def element_map(self) -> dict[str, DiagramElement]:
        return {e.element_id: e for e in self.elements}

    @cached_property
    def stage_map(self) -> dict[str, PipelineStage]:
        return {s.stage_id: s for s in self.stages}

    @cached_property
    def attachment_map(self) -> dict[str, AttachmentRef]:
        return {a.attachment_id: a for a in self.attachments}

    def ml_models(self) -> list[DiagramElement]:
        return [e for e in self.elements if e.stereotype is Stereotype.ML_MODEL]

    def stages_of(self, pipeline: Pipeline) -> list[PipelineStage]:
        return [self.stage_map[s] for s in pipeline.stages if s in self.stage_map]

    def replace(self, **changes: object) -> Document:
        return replace(self, **changes)

    def without(self, entity: object) -> Document:
        """Copy of the document with one entity (matched by identity) removed."""
        if entity is self.ops_view:
            return self.replace(ops_view=None)
        for name in COLLECTIONS:
            items = getattr(self, name)
            if any(x is entity for x in items):
                return self.replace(**{name: tuple(x for x in items if x is not entity)})
        raise ValueError("entity does not belong to this document")


def entity_field_names(entity: object) -> list[str]:
    return [f.name for f in fields(entity) if f.compare]
