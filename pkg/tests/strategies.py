"""Hypothesis strategies for documents, lineage graphs and rating matrices."""
from __future__ import annotations

from datetime import date

from hypothesis import strategies as st

from radai.compliance import RaterMatrix
from radai.lineage import LineageGraph
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
)

# Any text at all, including quotes, backslashes, newlines and '#'.
texts = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=24)
trimmed = texts.map(str.strip).filter(bool)
tokens = st.from_regex(r"[a-z][a-z0-9_%-]{0,7}", fullmatch=True)
units = st.from_regex(r"[a-z%/][a-z0-9%/]{0,3}", fullmatch=True)
finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
durations = st.integers(1, 10**9).map(Duration)
days = st.dates(min_value=date(1000, 1, 1), max_value=date(9999, 12, 31))
hexes = st.from_regex(r"[0-9a-f]{8,64}", fullmatch=True)


def opt(strategy):
    return st.none() | strategy


def enum(cls):
    return st.sampled_from(list(cls))


confidences = st.builds(
    ConfidenceSpec,
    metric=tokens,
    comparator=enum(Comparator),
    value=finite,
    unit=opt(units),
    condition=opt(trimmed),
)
gates = st.builds(QualityGate, check=opt(enum(GateCheck)), threshold=opt(confidences), on_failure=opt(enum(GateAction)))
shares = st.builds(TrafficShare, label=trimmed, percent=st.floats(0, 100))
monitoring = st.builds(
    MonitoringEntry,
    model_id=st.just("m-0"),
    metrics=st.lists(tokens, min_size=1, max_size=3).map(tuple),
    alert_threshold=confidences,
)


def _some(cls, **parts):
    """Instances of ``cls`` with at least one part set (empty ones do not survive serialization)."""
    return st.builds(cls, **parts).filter(lambda x: x != cls())


retraining = _some(
    RetrainingPolicy,
    triggers=st.lists(enum(RetrainingTrigger), max_size=3).map(tuple),
    automation=opt(enum(Automation)),
    approval=opt(texts),
)
deployment = _some(
    DeploymentPolicy,
    strategy=opt(enum(DeploymentStrategy)),
    promotion_criteria=opt(texts),
    traffic_split=st.lists(shares, max_size=3).map(tuple),
)
rollback = _some(
    RollbackPolicy, triggers=opt(texts), retention_depth=opt(st.integers(1, 50)), downstream_note=opt(texts)
)
regions = _some(RegionContract, confidence=opt(confidences), fallback=opt(texts), degradation=opt(texts))


@st.composite
def documents(draw, max_each: int = 3) -> Document:
    """Documents whose references resolve against their own declarations.

    Identifiers carry a per-kind prefix so declarations never collide.
    """

    def ids(prefix: str, n: int = max_each) -> list[str]:
        return draw(st.lists(st.integers(0, 9), max_size=n, unique=True).map(lambda xs: [f"{prefix}-{x}" for x in xs]))

    element_ids, stage_ids = ids("el", 5), ids("st", 4)
    model_ids, attach_ids = ids("m"), ids("at")
    nodes = element_ids + stage_ids

    def refs(pool: list[str], max_size: int = 3):
        return st.lists(st.sampled_from(pool), max_size=max_size).map(tuple) if pool else st.just(())

    def ref(pool: list[str]):
        return opt(st.sampled_from(pool)) if pool else st.none()

    elements = []
    for eid in element_ids:
        stereo = draw(opt(enum(Stereotype)))
        det = False if stereo is Stereotype.ML_MODEL else draw(st.booleans())
        elements.append(
            DiagramElement(
                eid,
                name=draw(opt(texts)),
                stereotype=stereo,
                deterministic=det,
                risk_class=draw(opt(enum(RiskClass))),
                region_contract=draw(opt(regions)),
            )
        )
    stages = [
        PipelineStage(
            sid,
            kind=draw(enum(StageKind)),
            gates=draw(st.lists(gates, max_size=2).map(tuple)),
            reads_from=draw(refs(nodes)),
            writes_to=draw(refs(nodes)),
        )
        for sid in stage_ids
    ]
    attachments = []
    for aid in attach_ids:
        kind = draw(enum(AttachmentKind))
        note = draw(trimmed) if kind is AttachmentKind.OTHER else draw(opt(texts))
        attachments.append(AttachmentRef(aid, kind=kind, uri=draw(trimmed), note=note))
    models = [
        ModelEntry(
            mid,
            version=draw(opt(texts)),
            framework=draw(opt(texts)),
            dataset_hash=draw(opt(hexes | texts)),
            lineage_ref=draw(ref(nodes)),
            hyperparams=draw(ref(attach_ids)),
            primary_metric=draw(opt(confidences)),
            status=draw(opt(enum(ModelStatus))),
            owner=draw(opt(texts)),
            last_retrained=draw(opt(days)),
            model_card=draw(ref(attach_ids)),
        )
        for mid in model_ids
    ]
    boundaries = [
        BoundaryContract(
            bid,
            consumer=draw(ref(nodes)),
            provider=draw(ref(nodes)),
            output_type=draw(opt(enum(OutputType))),
            confidence=draw(opt(confidences)),
            update_frequency=draw(opt(durations)),
            fallback=draw(opt(enum(Fallback))),
            fallback_note=draw(opt(texts)),
        )
        for bid in ids("bd")
    ]
    pipelines = []
    if stage_ids:
        for pid in ids("pl", 2):
            listed = draw(st.lists(st.sampled_from(stage_ids), min_size=1, unique=True).map(tuple))
            pipelines.append(Pipeline(pid, stages=listed, data_cards=draw(refs(attach_ids))))
    cells = []
    if nodes:
        pairs = draw(st.lists(st.tuples(st.sampled_from(nodes), enum(Concern)), max_size=6, unique=True))
        cells = [
            ConcernCell(
                comp,
                concern,
                method=draw(opt(texts)),
                threshold=draw(opt(confidences)),
                monitoring_frequency=draw(opt(durations)),
                owner=draw(opt(texts)),
            )
            for comp, concern in pairs
        ]
    adrs = [
        AIADR(
            aid,
            title=draw(opt(texts)),
            status=draw(opt(enum(ADRStatus))),
            context=draw(opt(texts)),
            decision=draw(opt(texts)),
            consequences=draw(opt(texts)),
            model_alternatives=draw(st.lists(texts, max_size=3).map(tuple)),
            dataset=draw(opt(texts)),
            fairness_bias=draw(opt(texts)),
            model_lifetime=draw(opt(texts)),
            retraining_trigger=draw(opt(texts)),
            explainability=draw(opt(texts)),
            regulatory=draw(opt(texts)),
        )
        for aid in ids("adr", 2)
    ]
    scenarios = []
    for sid in ids("sc", 2):
        source = draw(opt(enum(ScenarioSource)))
        scenarios.append(
            QualityScenario(
                sid,
                source=source,
                source_note=draw(trimmed) if source is ScenarioSource.OTHER else draw(opt(texts)),
                stimulus=draw(opt(texts)),
                environment=draw(opt(enum(ScenarioEnvironment))),
                response=draw(opt(texts)),
                response_deadline=draw(opt(durations)),
            )
        )
    debts = [
        DebtEntry(
            did,
            category=draw(opt(enum(DebtCategory))),
            components=draw(refs(nodes + model_ids)),
            severity=draw(opt(enum(DebtSeverity))),
            effort=draw(opt(texts)),
            owner=draw(opt(texts)),
            status=draw(opt(enum(DebtStatus))),
        )
        for did in ids("db", 2)
    ]
    edges = []
    if len(nodes) >= 2:
        pairs = draw(st.lists(st.tuples(st.sampled_from(nodes), st.sampled_from(nodes)), max_size=6, unique=True))
        for a, b in pairs:
            if a != b:
                edges.append(
                    LineageEdge(
                        a,
                        b,
                        schema_note=draw(opt(texts)),
                        freshness=draw(opt(durations)),
                        privacy_class=draw(opt(enum(PrivacyClass))),
                    )
                )
    ops = None
    if draw(st.booleans()):
        monitored = draw(st.lists(monitoring, max_size=2)) if model_ids else []
        monitored = [MonitoringEntry(draw(st.sampled_from(model_ids)), m.metrics, m.alert_threshold) for m in monitored]
        ops = OperationalAIView(
            monitoring=tuple(monitored),
            retraining=draw(opt(retraining)),
            deployment=draw(opt(deployment)),
            rollback=draw(opt(rollback)),
        )
    project = draw(opt(st.just("proj-x")))
    return Document(
        project_id=project,
        title=draw(opt(texts)) if project else None,
        base_sections=frozenset(draw(st.lists(st.integers(1, 12), max_size=12))),
        boundaries=tuple(boundaries),
        models=tuple(models),
        pipelines=tuple(pipelines),
        stages=tuple(stages),
        concern_matrix=tuple(cells),
        adrs=tuple(adrs),
        scenarios=tuple(scenarios),
        debts=tuple(debts),
        ops_view=ops,
        elements=tuple(elements),
        lineage_edges=tuple(edges),
        attachments=tuple(attachments),
    )


@st.composite
def graphs(draw, max_nodes: int = 12) -> LineageGraph:
    n = draw(st.integers(1, max_nodes))
    names = [f"n{i:02d}" for i in range(n)]
    pairs = st.tuples(st.sampled_from(names), st.sampled_from(names)).filter(lambda p: p[0] != p[1])
    edges = draw(st.lists(pairs, max_size=n * 3, unique=True))
    flags = {name: draw(st.booleans()) for name in names}
    return LineageGraph.from_edges(edges, set(names), flags)


@st.composite
def rater_matrices(draw, max_items: int = 10, max_raters: int = 8) -> RaterMatrix:
    n = draw(st.integers(1, max_items))
    r = draw(st.integers(2, max_raters))
    rows = draw(st.lists(st.lists(st.integers(0, 2), min_size=r, max_size=r), min_size=n, max_size=n))
    return RaterMatrix(rows)
