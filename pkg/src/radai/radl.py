"""RADL: the line-oriented block format that carries an AI-extended architecture document.

A file is an optional ``# radl 1`` header followed by blocks::

    [e1.boundary "route-override-api"]
    consumer = operator-dashboard
    provider = route-optimization
    output_type = continuous
    confidence = "MAE <= 5.5 min @ P95 latency < 50 ms"
    update_frequency = P1D
    fallback = human_escalation

Each block kind has a fixed table of keys. The same table drives parsing and
canonical serialization, which keeps the two in lockstep.
"""
from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from radai.diagnostics import SourceSpan
from radai.model import (
    AIADR,
    ADRStatus,
    AttachmentKind,
    AttachmentRef,
    Automation,
    BoundaryContract,
    Comparator,
    Concern,
    ConcernCell,
    ConfidenceSpec,
    DebtCategory,
    DebtEntry,
    DebtSeverity,
    DebtStatus,
    DeploymentPolicy,
    DeploymentStrategy,
    DiagramElement,
    Document,
    Duration,
    Fallback,
    GateAction,
    GateCheck,
    IDENT_RE,
    LineageEdge,
    ModelEntry,
    ModelStatus,
    MonitoringEntry,
    OperationalAIView,
    OutputType,
    Pipeline,
    PipelineStage,
    PrivacyClass,
    QualityGate,
    QualityScenario,
    RegionContract,
    RetrainingPolicy,
    RetrainingTrigger,
    RiskClass,
    RollbackPolicy,
    ScenarioEnvironment,
    ScenarioSource,
    StageKind,
    Stereotype,
    TrafficShare,
    UnknownKey,
    VocabularyError,
    format_number,
    sort_key,
)

RADL_VERSION = 1
HEADER = f"# radl {RADL_VERSION}"

KINDS = (
    "meta",
    "arc42.section",
    "e1.boundary",
    "e2.model",
    "e3.pipeline",
    "e3.stage",
    "e4.cell",
    "e5.adr",
    "e6.scenario",
    "e7.debt",
    "e8.ops",
    "c4.element",
    "c4.lineage",
    "attach",
)
ANONYMOUS_KINDS = frozenset({"e4.cell", "e8.ops", "c4.lineage"})


@dataclass(frozen=True)
class ParseError:
    message: str
    span: SourceSpan
    expected: str | None = None
    rule: str | None = None

    def __str__(self) -> str:
        text = f"{self.span}: {self.message}"
        if self.expected:
            text += f" (expected {self.expected})"
        return text


class RADLSyntaxError(Exception):
    """Raised by :func:`parse` with every error found in the input."""

    def __init__(self, errors: Sequence[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


# ---------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class Scalar:
    text: str
    quoted: bool
    col: int
    end: int  # column of the last character


@dataclass(frozen=True)
class ListValue:
    items: tuple[Scalar, ...]
    col: int
    end: int


class _LexError(Exception):
    def __init__(self, message: str, col: int, end: int | None = None, expected: str | None = None):
        super().__init__(message)
        self.message = message
        self.col = col
        self.end = end if end is not None else col
        self.expected = expected


_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}
_BARE_RE = re.compile(r'[^\s,\[\]"#]+')


def quote(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    return f'"{out}"'


def _scan_scalar(line: str, i: int) -> tuple[Scalar, int]:
    if line[i] == '"':
        start = i
        i += 1
        buf: list[str] = []
        while i < len(line):
            ch = line[i]
            if ch == "\\":
                if i + 1 >= len(line) or line[i + 1] not in _ESCAPES:
                    raise _LexError("invalid escape sequence in string", i + 1, min(i + 2, len(line)))
                buf.append(_ESCAPES[line[i + 1]])
                i += 2
            elif ch == '"':
                return Scalar("".join(buf), True, start + 1, i + 1), i + 1
            else:
                buf.append(ch)
                i += 1
        raise _LexError("unterminated string", start + 1, len(line), expected='closing \'"\'')
    m = _BARE_RE.match(line, i)
    if not m:
        raise _LexError(f"unexpected character {line[i]!r}", i + 1, expected="a value")
    return Scalar(m.group(), False, i + 1, m.end()), m.end()


def _skip_ws(line: str, i: int) -> int:
    while i < len(line) and line[i] in " \t":
        i += 1
    return i


def _scan_value(line: str, i: int) -> Scalar | ListValue:
    if i >= len(line):
        raise _LexError("missing value", max(1, len(line)), expected="a value")
    if line[i] == "[":
        start = i
        i = _skip_ws(line, i + 1)
        items: list[Scalar] = []
        if i < len(line) and line[i] == "]":
            value: Scalar | ListValue = ListValue((), start + 1, i + 1)
            i += 1
        else:
            while True:
                if i >= len(line):
                    raise _LexError("unterminated list", start + 1, len(line), expected="']'")
                item, i = _scan_scalar(line, i)
                items.append(item)
                i = _skip_ws(line, i)
                if i >= len(line):
                    raise _LexError("unterminated list", start + 1, len(line), expected="']'")
                if line[i] == ",":
                    i = _skip_ws(line, i + 1)
                    continue
                if line[i] == "]":
                    break
                raise _LexError(f"unexpected character {line[i]!r} in list", i + 1, expected="',' or ']'")
            value = ListValue(tuple(items), start + 1, i + 1)
            i += 1
    else:
        value, i = _scan_scalar(line, i)
    i = _skip_ws(line, i)
    if i < len(line) and line[i] != "#":
        raise _LexError("unexpected text after value", i + 1, len(line), expected="end of line or '#' comment")
    return value


# ---------------------------------------------------------------------------
# Confidence specifications

_CMP_ALIASES = {"≤": "<=", "≥": ">="}
_HEAD_RE = re.compile(r"\s*(?P<metric>[^\s<>=@|,≤≥\[\]\"]+)?\s*(?P<cmp><=|>=|≤|≥|<|>|=)?")
_NUMBER_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?\Z")


class ConfidenceSyntaxError(ValueError):
    pass


def parse_confidence(expr: str) -> ConfidenceSpec:
    """Parse ``metric cmp value [unit] [@ condition]``.

    >>> str(parse_confidence("null-rate < 1 %"))
    'null-rate < 1 %'
    """
    m = _HEAD_RE.match(expr)
    if not m.group("metric"):
        raise ConfidenceSyntaxError(f"missing metric in {expr!r}")
    if not m.group("cmp"):
        raise ConfidenceSyntaxError(f"missing comparator in {expr!r}")
    cmp = _CMP_ALIASES.get(m.group("cmp"), m.group("cmp"))
    rest = expr[m.end():]
    body, at, condition = rest.partition("@")
    tokens = body.split()
    if not tokens:
        raise ConfidenceSyntaxError(f"missing value in {expr!r}")
    if not _NUMBER_RE.match(tokens[0]):
        raise ConfidenceSyntaxError(f"value {tokens[0]!r} is not a number")
    if len(tokens) > 2:
        raise ConfidenceSyntaxError(f"unexpected text {' '.join(tokens[2:])!r}; put qualifiers after '@'")
    condition = condition.strip()
    if at and not condition:
        raise ConfidenceSyntaxError("empty condition after '@'")
    return ConfidenceSpec(
        metric=m.group("metric"),
        comparator=Comparator(cmp),
        value=float(tokens[0]),
        unit=tokens[1] if len(tokens) == 2 else None,
        condition=condition or None,
    )


# ---------------------------------------------------------------------------
# Per-key converters


class Conv:
    expected = "a value"

    def parse(self, v: Scalar | ListValue) -> Any:
        if not isinstance(v, Scalar):
            raise ValueError(f"expected {self.expected}, got a list")
        return self.parse_text(v.text)

    def parse_text(self, text: str) -> Any:
        raise NotImplementedError

    def format(self, value: Any) -> str:
        raise NotImplementedError


class Text(Conv):
    expected = "text"

    def parse_text(self, text: str) -> str:
        return text

    def format(self, value: str) -> str:
        return quote(value)


class Ident(Conv):
    expected = "an identifier"

    def parse_text(self, text: str) -> str:
        if not IDENT_RE.match(text):
            raise ValueError(f"{text!r} is not a valid identifier")
        return text

    def format(self, value: str) -> str:
        return value


class Choice(Conv):
    def __init__(self, enum_cls: type, rule: str | None = None):
        self.enum_cls = enum_cls
        self.rule = rule
        self.expected = " | ".join(m.value for m in enum_cls)

    def parse_text(self, text: str) -> Any:
        try:
            return self.enum_cls(text)
        except ValueError:
            raise VocabularyError(self.enum_cls.__name__, text, (m.value for m in self.enum_cls)) from None

    def format(self, value: Any) -> str:
        return value.value


class Flag(Conv):
    expected = "true | false"

    def parse_text(self, text: str) -> bool:
        if text not in ("true", "false"):
            raise ValueError(f"{text!r} is not a boolean")
        return text == "true"

    def format(self, value: bool) -> str:
        return "true" if value else "false"


class Count(Conv):
    expected = "a positive integer"

    def parse_text(self, text: str) -> int:
        if not re.fullmatch(r"[0-9]+", text) or int(text) < 1:
            raise ValueError(f"{text!r} is not a positive integer")
        return int(text)

    def format(self, value: int) -> str:
        return str(value)


class Day(Conv):
    expected = "a date YYYY-MM-DD"

    def parse_text(self, text: str) -> date:
        if not re.fullmatch(r"\d{4}-\d{2}-\d{2}", text):
            raise ValueError(f"{text!r} is not a YYYY-MM-DD date")
        return date.fromisoformat(text)

    def format(self, value: date) -> str:
        return value.isoformat()


class Period(Conv):
    expected = "an ISO-8601 duration such as P1D or PT2H"

    def parse_text(self, text: str) -> Duration:
        return Duration.parse(text)

    def format(self, value: Duration) -> str:
        return str(value)


class Confidence(Conv):
    expected = "metric cmp value [unit] [@ condition]"

    def parse_text(self, text: str) -> ConfidenceSpec:
        return parse_confidence(text)

    def format(self, value: ConfidenceSpec) -> str:
        return quote(str(value))


class Gate(Conv):
    expected = "check | threshold | action"

    def parse_text(self, text: str) -> QualityGate:
        if text.count("|") < 2:
            raise ValueError(f"quality gate {text!r} needs three '|'-separated parts")
        check, rest = text.split("|", 1)
        threshold, action = rest.rsplit("|", 1)
        check, threshold, action = check.strip(), threshold.strip(), action.strip()
        return QualityGate(
            check=Choice(GateCheck).parse_text(check) if check else None,
            threshold=parse_confidence(threshold) if threshold else None,
            on_failure=Choice(GateAction).parse_text(action) if action else None,
        )

    def format(self, gate: QualityGate) -> str:
        parts = (
            gate.check.value if gate.check else "",
            str(gate.threshold) if gate.threshold else "",
            gate.on_failure.value if gate.on_failure else "",
        )
        return quote(" | ".join(parts))


class Monitor(Conv):
    expected = "model: metric, metric | alert threshold"

    def parse_text(self, text: str) -> MonitoringEntry:
        head, bar, threshold = text.partition("|")
        model_id, colon, metrics = head.partition(":")
        if not bar or not colon:
            raise ValueError(f"monitoring entry {text!r} must read 'model: metrics | threshold'")
        return MonitoringEntry(
            model_id=model_id.strip(),
            metrics=tuple(m.strip() for m in metrics.split(",") if m.strip()),
            alert_threshold=parse_confidence(threshold.strip()),
        )

    def format(self, entry: MonitoringEntry) -> str:
        return quote(f"{entry.model_id}: {', '.join(entry.metrics)} | {entry.alert_threshold}")


class Share(Conv):
    expected = "label: percent"

    def parse_text(self, text: str) -> TrafficShare:
        label, colon, percent = text.rpartition(":")
        if not colon or not _NUMBER_RE.match(percent.strip()):
            raise ValueError(f"traffic share {text!r} must read 'label: percent'")
        return TrafficShare(label.strip(), float(percent))

    def format(self, share: TrafficShare) -> str:
        return quote(f"{share.label}: {format_number(share.percent)}")


class Many(Conv):
    def __init__(self, inner: Conv):
        self.inner = inner
        self.expected = f"a list of {inner.expected}"

    def parse(self, v: Scalar | ListValue) -> tuple:
        if not isinstance(v, ListValue):
            raise ValueError("expected a list, e.g. [a, b]")
        return tuple(self.inner.parse(item) for item in v.items)

    def format(self, values: tuple) -> str:
        return "[" + ", ".join(self.inner.format(v) for v in values) + "]"


# ---------------------------------------------------------------------------
# Block schemas: (radl key, attribute path, converter), in canonical order.

Schema = tuple[tuple[str, str, Conv], ...]

SCHEMAS: dict[str, Schema] = {
    "meta": (("title", "title", Text()),),
    "arc42.section": (),
    "e1.boundary": (
        ("consumer", "consumer", Ident()),
        ("provider", "provider", Ident()),
        ("output_type", "output_type", Choice(OutputType)),
        ("confidence", "confidence", Confidence()),
        ("update_frequency", "update_frequency", Period()),
        ("fallback", "fallback", Choice(Fallback)),
        ("fallback_note", "fallback_note", Text()),
    ),
    "e2.model": (
        ("version", "version", Text()),
        ("framework", "framework", Text()),
        ("dataset_hash", "dataset_hash", Text()),
        ("lineage_ref", "lineage_ref", Ident()),
        ("hyperparams", "hyperparams", Ident()),
        ("metric", "primary_metric", Confidence()),
        ("status", "status", Choice(ModelStatus)),
        ("owner", "owner", Text()),
        ("last_retrained", "last_retrained", Day()),
        ("model_card", "model_card", Ident()),
    ),
    "e3.pipeline": (
        ("stages", "stages", Many(Ident())),
        ("data_cards", "data_cards", Many(Ident())),
    ),
    "e3.stage": (
        ("kind", "kind", Choice(StageKind)),
        ("gates", "gates", Many(Gate())),
        ("reads_from", "reads_from", Many(Ident())),
        ("writes_to", "writes_to", Many(Ident())),
    ),
    "e4.cell": (
        ("component", "component", Ident()),
        ("concern", "concern", Choice(Concern)),
        ("method", "method", Text()),
        ("threshold", "threshold", Confidence()),
        ("monitoring_frequency", "monitoring_frequency", Period()),
        ("owner", "owner", Text()),
    ),
    "e5.adr": (
        ("title", "title", Text()),
        ("status", "status", Choice(ADRStatus)),
        ("context", "context", Text()),
        ("decision", "decision", Text()),
        ("consequences", "consequences", Text()),
        ("model_alternatives", "model_alternatives", Many(Text())),
        ("dataset", "dataset", Text()),
        ("fairness_bias", "fairness_bias", Text()),
        ("model_lifetime", "model_lifetime", Text()),
        ("retraining_trigger", "retraining_trigger", Text()),
        ("explainability", "explainability", Text()),
        ("regulatory", "regulatory", Text()),
    ),
    "e6.scenario": (
        ("source", "source", Choice(ScenarioSource)),
        ("source_note", "source_note", Text()),
        ("stimulus", "stimulus", Text()),
        ("environment", "environment", Choice(ScenarioEnvironment)),
        ("response", "response", Text()),
        ("response_deadline", "response_deadline", Period()),
    ),
    "e7.debt": (
        ("category", "category", Choice(DebtCategory, rule="E7-001")),
        ("components", "components", Many(Ident())),
        ("severity", "severity", Choice(DebtSeverity)),
        ("effort", "effort", Text()),
        ("owner", "owner", Text()),
        ("status", "status", Choice(DebtStatus)),
    ),
    "e8.ops": (
        ("monitoring", "monitoring", Many(Monitor())),
        ("retraining.triggers", "retraining.triggers", Many(Choice(RetrainingTrigger))),
        ("retraining.automation", "retraining.automation", Choice(Automation)),
        ("retraining.approval", "retraining.approval", Text()),
        ("deployment.strategy", "deployment.strategy", Choice(DeploymentStrategy)),
        ("deployment.promotion_criteria", "deployment.promotion_criteria", Text()),
        ("deployment.traffic_split", "deployment.traffic_split", Many(Share())),
        ("rollback.triggers", "rollback.triggers", Text()),
        ("rollback.retention_depth", "rollback.retention_depth", Count()),
        ("rollback.downstream_note", "rollback.downstream_note", Text()),
    ),
    "c4.element": (
        ("name", "name", Text()),
        ("stereotype", "stereotype", Choice(Stereotype, rule="C4-001")),
        ("deterministic", "deterministic", Flag()),
        ("risk_class", "risk_class", Choice(RiskClass)),
        ("region.confidence", "region_contract.confidence", Confidence()),
        ("region.fallback", "region_contract.fallback", Text()),
        ("region.degradation", "region_contract.degradation", Text()),
    ),
    "c4.lineage": (
        ("from", "source", Ident()),
        ("to", "target", Ident()),
        ("schema", "schema_note", Text()),
        ("freshness", "freshness", Period()),
        ("privacy", "privacy_class", Choice(PrivacyClass)),
    ),
    "attach": (
        ("kind", "kind", Choice(AttachmentKind)),
        ("uri", "uri", Text()),
        ("note", "note", Text()),
    ),
}


def _group(values: dict[str, Any], prefix: str) -> dict[str, Any]:
    return {k[len(prefix) + 1:]: v for k, v in values.items() if k.startswith(prefix + ".")}


def _plain(values: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in values.items() if "." not in k}


def _build_ops(ident: str | None, v: dict[str, Any], **loc: Any) -> OperationalAIView:
    parts: dict[str, Any] = {}
    for name, cls in (("retraining", RetrainingPolicy), ("deployment", DeploymentPolicy), ("rollback", RollbackPolicy)):
        sub = _group(v, name)
        if sub:
            parts[name] = cls(**sub)
    return OperationalAIView(monitoring=v.get("monitoring", ()), **parts, **loc)


def _build_element(ident: str | None, v: dict[str, Any], **loc: Any) -> DiagramElement:
    region = _group(v, "region_contract")
    return DiagramElement(
        element_id=ident,
        region_contract=RegionContract(**region) if region else None,
        **_plain(v),
        **loc,
    )


_BUILDERS: dict[str, Callable[..., Any]] = {
    "e1.boundary": lambda i, v, **loc: BoundaryContract(interface_id=i, **v, **loc),
    "e2.model": lambda i, v, **loc: ModelEntry(model_id=i, **v, **loc),
    "e3.pipeline": lambda i, v, **loc: Pipeline(pipeline_id=i, stages=v.pop("stages", ()), **v, **loc),
    "e3.stage": lambda i, v, **loc: PipelineStage(stage_id=i, kind=v.pop("kind", None), **v, **loc),
    "e4.cell": lambda i, v, **loc: ConcernCell(
        component=_required(v, "component"), concern=_required(v, "concern"), **v, **loc
    ),
    "e5.adr": lambda i, v, **loc: AIADR(adr_id=i, **v, **loc),
    "e6.scenario": lambda i, v, **loc: QualityScenario(scenario_id=i, **v, **loc),
    "e7.debt": lambda i, v, **loc: DebtEntry(debt_id=i, **v, **loc),
    "e8.ops": _build_ops,
    "c4.element": _build_element,
    "c4.lineage": lambda i, v, **loc: LineageEdge(source=_required(v, "source"), target=_required(v, "target"), **v, **loc),
    "attach": lambda i, v, **loc: AttachmentRef(
        attachment_id=i, kind=_required(v, "kind"), uri=_required(v, "uri"), **v, **loc
    ),
}

_COLLECTION_OF = {
    "e1.boundary": "boundaries",
    "e2.model": "models",
    "e3.pipeline": "pipelines",
    "e3.stage": "stages",
    "e4.cell": "concern_matrix",
    "e5.adr": "adrs",
    "e6.scenario": "scenarios",
    "e7.debt": "debts",
    "c4.element": "elements",
    "c4.lineage": "lineage_edges",
    "attach": "attachments",
}
KIND_OF_COLLECTION = {v: k for k, v in _COLLECTION_OF.items()}

_RADL_KEY_OF_ATTR = {"source": "from", "target": "to", "schema_note": "schema", "privacy_class": "privacy", "primary_metric": "metric"}


def _required(values: dict[str, Any], attr: str) -> Any:
    if attr not in values:
        raise ValueError(f"missing required key {_RADL_KEY_OF_ATTR.get(attr, attr)!r}")
    return values.pop(attr)


# ---------------------------------------------------------------------------
# Parsing

_HEADER_RE = re.compile(r"\[(?P<kind>[^\s\]\"]*)(?:\s+(?P<id>\"[^\"]*\"|\S+))?\]\s*(?:#.*)?\Z")
_ENTRY_RE = re.compile(r"(?P<key>[A-Za-z][A-Za-z0-9_.]*)\s*=\s*")
_VERSION_RE = re.compile(r"#\s*radl\s+(\S+)\s*\Z")


@dataclass
class _Block:
    kind: str
    ident: str | None
    line: int
    line_end: int
    end_col: int
    values: dict[str, Any]
    spans: dict[str, SourceSpan]
    failed: bool = False


def _decode(source: str | bytes, file: str) -> str:
    if isinstance(source, str):
        return source
    try:
        return source.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = source[: exc.start]
        line = prefix.count(b"\n") + 1
        line_prefix = prefix[prefix.rfind(b"\n") + 1:].decode("utf-8", errors="replace")
        col = len(line_prefix) + 1
        raise RADLSyntaxError([ParseError("input is not valid UTF-8", SourceSpan.point(file, line, col))]) from None


def parse(source: str | bytes, file: str = "<input>") -> Document:
    """Parse RADL text into an unresolved :class:`Document`.

    Raises :class:`RADLSyntaxError` carrying every error found. Unknown keys
    inside a known block are kept on the document for the linter to report.
    """
    text = _decode(source, file)
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.replace("\r\n", "\n").split("\n")
    errors: list[ParseError] = []
    blocks: list[_Block] = []
    unknown: list[UnknownKey] = []
    current: _Block | None = None

    def error(msg: str, line: int, col: int, end: int | None = None, expected: str | None = None, rule: str | None = None) -> None:
        width = max(1, len(lines[line - 1]))
        col = min(max(1, col), width)
        end = min(max(col, end if end is not None else col), width)
        errors.append(ParseError(msg, SourceSpan(file, line, col, line, end), expected, rule))

    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _VERSION_RE.match(stripped)
            if m and lineno == 1 and m.group(1) != str(RADL_VERSION):
                error(f"unsupported radl version {m.group(1)!r}", lineno, 1, len(raw), expected=HEADER)
            continue
        indent = len(raw) - len(raw.lstrip())
        if stripped.startswith("["):
            # Entries under a rejected header are still lexed so their errors surface too.
            current = _Block("", None, lineno, lineno, 1, {}, {}, failed=True)
            m = _HEADER_RE.match(stripped)
            if not m:
                error("malformed block header", lineno, indent + 1, len(raw), expected='[kind "id"]')
                continue
            kind, ident = m.group("kind"), m.group("id")
            if kind not in SCHEMAS:
                error(f"unknown block kind {kind!r}", lineno, indent + 2, indent + 1 + len(kind), expected=" | ".join(KINDS))
                continue
            if ident is not None:
                if not (ident.startswith('"') and IDENT_RE.match(ident[1:-1] if len(ident) > 1 else "")):
                    error(f"invalid block identifier {ident}", lineno, indent + 1, len(raw), expected='"[A-Za-z][A-Za-z0-9._-]*"')
                    continue
                ident = ident[1:-1]
            if kind in ANONYMOUS_KINDS and ident is not None:
                error(f"{kind} blocks take no identifier", lineno, indent + 1, len(raw))
                continue
            if kind not in ANONYMOUS_KINDS and ident is None:
                error(f"{kind} block needs an identifier", lineno, indent + 1, len(raw), expected=f'[{kind} "id"]')
                continue
            current = _Block(kind, ident, lineno, lineno, max(1, len(raw)), {}, {})
            blocks.append(current)
            continue
        m = _ENTRY_RE.match(raw, indent)
        if not m:
            error("expected a block header or 'key = value'", lineno, indent + 1, len(raw))
            continue
        if current is None:
            error("entry outside of any block", lineno, indent + 1, len(raw))
            continue
        key = m.group("key")
        try:
            value = _scan_value(raw, m.end())
        except _LexError as exc:
            error(exc.message, lineno, exc.col, exc.end, exc.expected)
            current.failed = True
            continue
        current.line_end, current.end_col = lineno, max(1, len(raw))
        span = SourceSpan(file, lineno, value.col, lineno, value.end)
        if key in current.spans:
            first = current.spans[key]
            error(f"duplicate key {key!r} (first set on line {first.line_start})", lineno, indent + 1, indent + len(key))
            current.failed = True
            continue
        current.spans[key] = span
        if current.kind not in SCHEMAS:
            continue
        schema = {k: (attr, conv) for k, attr, conv in SCHEMAS[current.kind]}
        if key not in schema:
            unknown.append(UnknownKey(current.kind, current.ident or current.kind, key, span))
            continue
        attr, conv = schema[key]
        try:
            current.values[attr] = conv.parse(value)
        except VocabularyError as exc:
            expected = getattr(conv, "expected", None)
            if isinstance(conv, Many):
                expected = conv.inner.expected
            rule = getattr(conv, "rule", None) or getattr(getattr(conv, "inner", None), "rule", None)
            error(f"{key}: {exc.value!r} is not allowed", lineno, value.col, value.end, expected, rule)
            current.failed = True
        except ValueError as exc:
            error(f"{key}: {exc}", lineno, value.col, value.end, conv.expected)
            current.failed = True

    doc = _assemble(blocks, unknown, file, error)
    if errors:
        raise RADLSyntaxError(errors)
    return doc


def _assemble(blocks: list[_Block], unknown: list[UnknownKey], file: str, error: Callable[..., None]) -> Document:
    fields: dict[str, Any] = {name: [] for name in _COLLECTION_OF.values()}
    sections: set[int] = set()
    meta: _Block | None = None
    ops: OperationalAIView | None = None
    ops_line = 0
    for block in blocks:
        if block.failed:
            continue
        span = SourceSpan(file, block.line, 1, block.line_end, block.end_col)
        if block.kind == "meta":
            if meta is not None:
                error(f"second meta block (first on line {meta.line})", block.line, 1, block.end_col)
                continue
            meta = block
            continue
        if block.kind == "arc42.section":
            m = re.fullmatch(r"s([1-9]|1[0-2])", block.ident or "")
            if not m:
                error(f"arc42 section id must be s1..s12, got {block.ident!r}", block.line, 1, block.end_col, expected="s1..s12")
            elif int(m.group(1)) in sections:
                error(f"arc42 section {block.ident} declared twice", block.line, 1, block.end_col)
            else:
                sections.add(int(m.group(1)))
            continue
        try:
            entity = _BUILDERS[block.kind](block.ident, dict(block.values), span=span, key_spans=_key_spans(block))
        except (ValueError, TypeError) as exc:
            error(f"{block.kind} {block.ident or ''}: {exc}".replace("  ", " "), block.line, 1, block.end_col)
            continue
        if block.kind == "e8.ops":
            if ops is not None:
                error(f"second e8.ops block (first on line {ops_line})", block.line, 1, block.end_col)
                continue
            ops, ops_line = entity, block.line
            continue
        fields[_COLLECTION_OF[block.kind]].append(entity)
    return Document(
        project_id=meta.ident if meta else None,
        title=meta.values.get("title") if meta else None,
        base_sections=frozenset(sections),
        ops_view=ops,
        unknown_keys=tuple(unknown),
        meta_span=SourceSpan(file, meta.line, 1, meta.line_end, meta.end_col) if meta else None,
        **fields,
    )


def _key_spans(block: _Block) -> dict[str, SourceSpan]:
    schema = {k: attr for k, attr, _ in SCHEMAS[block.kind]}
    out = {}
    for key, span in block.spans.items():
        out[key] = span
        attr = schema.get(key)
        if attr and attr != key:
            out[attr] = span
    return out


# ---------------------------------------------------------------------------
# Serialization


def _get(entity: Any, path: str) -> Any:
    for part in path.split("."):
        if entity is None:
            return None
        entity = getattr(entity, part)
    return entity


def _block_text(kind: str, ident: str | None, entity: Any) -> str:
    head = f"[{kind}]" if ident is None else f'[{kind} "{ident}"]'
    lines = [head]
    for key, attr, conv in SCHEMAS[kind]:
        value = _get(entity, attr)
        if value is None or value == ():
            continue
        lines.append(f"{key} = {conv.format(value)}")
    return "\n".join(lines)


def _ident_of(entity: Any) -> str | None:
    if isinstance(entity, (ConcernCell, LineageEdge, OperationalAIView)):
        return None
    return entity.key


def serialize(doc: Document) -> str:
    """Canonical RADL text for ``doc``.

    Blocks are ordered by kind, then identifier; keys follow the fixed
    per-kind order; output is LF-only with one blank line between blocks.
    """
    blocks: list[str] = []
    if doc.project_id is not None:
        blocks.append(_block_text("meta", doc.project_id, doc))
    for n in sorted(doc.base_sections):
        blocks.append(f'[arc42.section "s{n}"]')
    for kind in KINDS:
        if kind == "e8.ops":
            if doc.ops_view is not None:
                blocks.append(_block_text(kind, None, doc.ops_view))
            continue
        collection = _COLLECTION_OF.get(kind)
        if collection is None:
            continue
        for entity in sorted(getattr(doc, collection), key=sort_key):
            blocks.append(_block_text(kind, _ident_of(entity), entity))
    return "\n\n".join([HEADER, *blocks]) + "\n"


# ---------------------------------------------------------------------------
# Files and directories


def merge(documents: Iterable[Document]) -> Document:
    """Combine per-file documents into one; identifiers are checked later by resolution."""
    docs = list(documents)
    errors: list[ParseError] = []
    project = [d for d in docs if d.project_id is not None or d.title is not None]
    ops = [d for d in docs if d.ops_view is not None]
    for what, found, span_of in (
        ("meta", project, lambda d: d.meta_span),
        ("e8.ops", ops, lambda d: d.ops_view.span),
    ):
        for extra in found[1:]:
            span = span_of(extra) or SourceSpan.point("<input>", 1)
            errors.append(ParseError(f"{what} block declared in more than one file", span))
    if errors:
        raise RADLSyntaxError(errors)
    merged: dict[str, list] = {name: [] for name in _COLLECTION_OF.values()}
    for d in docs:
        for name in merged:
            merged[name].extend(getattr(d, name))
    head = project[0] if project else Document()
    return Document(
        project_id=head.project_id,
        title=head.title,
        meta_span=head.meta_span,
        base_sections=frozenset().union(*(d.base_sections for d in docs)),
        ops_view=ops[0].ops_view if ops else None,
        unknown_keys=tuple(k for d in docs for k in d.unknown_keys),
        **merged,
    )


def radl_files(paths: Iterable[str | Path]) -> list[Path]:
    """Expand directories into their ``*.radl`` files, lexicographically."""
    out: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(q for q in p.rglob("*.radl") if q.is_file()))
        else:
            out.append(p)
    return out


def load(paths: Iterable[str | Path]) -> Document:
    """Parse files and directories into one merged document.

    Raises ``OSError`` for unreadable inputs and :class:`RADLSyntaxError`
    with the errors of every file.
    """
    files = radl_files(paths)
    payloads = [f.read_bytes() for f in files]

    def one(item: tuple[Path, bytes]) -> Document | RADLSyntaxError:
        try:
            return parse(item[1], str(item[0]))
        except RADLSyntaxError as exc:
            return exc

    with ThreadPoolExecutor(max_workers=min(8, max(1, len(files)))) as pool:
        results = list(pool.map(one, zip(files, payloads)))
    failures = [e for r in results if isinstance(r, RADLSyntaxError) for e in r.errors]
    if failures:
        raise RADLSyntaxError(failures)
    return merge(results)
