"""Data-lineage graph over diagram elements and pipeline stages.

Edges come from two places: declared lineage edges, and pipeline stages'
``reads_from`` (source -> stage) and ``writes_to`` (stage -> sink) lists.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from radai.model import Document, LineageEdge

MAX_CYCLES = 10_000

Edge = tuple[str, str]


@dataclass(frozen=True, eq=False)
class LineageGraph:
    nodes: frozenset[str]
    edges: Mapping[Edge, LineageEdge | None]
    determinism: Mapping[str, bool]
    successors: Mapping[str, tuple[str, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        succ: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge {a!r} -> {b!r} leaves the node set")
            succ[a].append(b)
        object.__setattr__(self, "successors", {n: tuple(sorted(v)) for n, v in succ.items()})

    @classmethod
    def from_edges(cls, edges: list[Edge], nodes: set[str] | None = None, determinism: Mapping[str, bool] | None = None) -> LineageGraph:
        all_nodes = set(nodes or ()) | {n for e in edges for n in e}
        flags = {n: True for n in all_nodes}
        flags.update(determinism or {})
        return cls(frozenset(all_nodes), {e: None for e in edges}, flags)

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)


def build_graph(doc: Document) -> LineageGraph:
    """Graph of every element and stage; references that do not resolve are skipped."""
    determinism = {s.stage_id: False for s in doc.stages}
    determinism.update({e.element_id: e.deterministic for e in doc.elements})
    nodes = frozenset(determinism)
    edges: dict[Edge, LineageEdge | None] = {}
    for e in doc.lineage_edges:
        if e.source in nodes and e.target in nodes:
            edges[(e.source, e.target)] = e
    for s in doc.stages:
        pairs = [(src, s.stage_id) for src in s.reads_from] + [(s.stage_id, dst) for dst in s.writes_to]
        for a, b in pairs:
            if a in nodes and b in nodes and a != b:
                edges.setdefault((a, b), None)
    return LineageGraph(nodes, edges, determinism)


def impact(g: LineageGraph, source: str) -> list[str]:
    """Everything downstream of ``source``, sorted: the cascading-drift blast radius.

    ``source`` itself appears only when it sits on a cycle.
    """
    if source not in g.nodes:
        raise KeyError(f"unknown node {source!r}")
    seen: set[str] = set()
    queue = deque(g.successors[source])
    while queue:
        node = queue.popleft()
        if node in seen:
            continue
        seen.add(node)
        queue.extend(g.successors[node])
    return sorted(seen)


class CycleList(list):
    """Cycles found, plus whether enumeration stopped at the bound."""

    truncated: bool = False


def cycles(g: LineageGraph, limit: int = MAX_CYCLES) -> CycleList:
    """Every elementary cycle, each rotated to start at its smallest node.

    Enumeration stops after ``limit`` cycles and sets ``truncated``.
    """
    dg = nx.DiGraph()
    dg.add_nodes_from(sorted(g.nodes))
    dg.add_edges_from(g.edge_list())
    found = CycleList()
    for cycle in nx.simple_cycles(dg):
        if len(found) >= limit:
            found.truncated = True
            break
        i = cycle.index(min(cycle))
        found.append(cycle[i:] + cycle[:i])
    found.sort()
    return found


def boundary_crossings(g: LineageGraph) -> list[Edge]:
    """Edges joining the deterministic and non-deterministic regions."""
    return [(a, b) for a, b in g.edge_list() if g.determinism[a] != g.determinism[b]]
