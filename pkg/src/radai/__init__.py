"""Tooling for AI-extended architecture documentation written in RADL.

Parse RADL files into a document model, resolve and lint them against the
extension rules, query the data-lineage graph, score EU AI Act Annex IV
addressability and emit PlantUML or Graphviz views.
"""
from __future__ import annotations

from radai.compliance import (
    ComplianceReport,
    RaterMatrix,
    aggregate_raters,
    concern_coverage,
    fleiss_kappa,
    score_document,
    score_profile,
)
from radai.diagnostics import Diagnostic, Severity, SourceSpan
from radai.diagram import DiagramRequest, emit, emit_lineage_overlay
from radai.lineage import LineageGraph, boundary_crossings, build_graph, cycles, impact
from radai.lint import LintProfile, explain, lint
from radai.model import Document
from radai.radl import RADLSyntaxError, load, parse, serialize
from radai.resolve import ResolutionError, resolve_links

__version__ = "0.1.0"

__all__ = [
    "ComplianceReport",
    "Diagnostic",
    "DiagramRequest",
    "Document",
    "LineageGraph",
    "LintProfile",
    "RADLSyntaxError",
    "RaterMatrix",
    "ResolutionError",
    "Severity",
    "SourceSpan",
    "aggregate_raters",
    "boundary_crossings",
    "build_graph",
    "concern_coverage",
    "cycles",
    "emit",
    "emit_lineage_overlay",
    "explain",
    "fleiss_kappa",
    "impact",
    "lint",
    "load",
    "parse",
    "resolve_links",
    "score_document",
    "score_profile",
    "serialize",
]
