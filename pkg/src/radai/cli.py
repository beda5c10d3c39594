"""Command-line front end: ``radai init|lint|score|concerns|lineage|diagram``.

Exit codes: 0 success, 1 warnings under ``--strict``, 2 lint errors or a
failed ``--min-percent`` gate, 3 unreadable or invalid input, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from pathlib import Path
from typing import Sequence, TextIO

from radai import compliance, diagram, lineage
from radai.diagnostics import Diagnostic, Severity
from radai.lint import PROFILES, lint
from radai.model import Document
from radai.radl import HEADER, KINDS, SCHEMAS, RADLSyntaxError, load, radl_files
from radai.resolve import ResolutionError, resolve_links

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_FINDINGS = 2
EXIT_INPUT = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class InputError(Exception):
    """Input could not be read, parsed or resolved; carries the report lines."""

    def __init__(self, lines: list[str], payload: list[dict]):
        self.lines = lines
        self.payload = payload
        super().__init__("\n".join(lines))


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _color(text: str, code: str, stream: TextIO) -> str:
    if os.environ.get("RADAI_NO_COLOR") or not stream.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


_SEVERITY_COLORS = {Severity.ERROR: "31", Severity.WARNING: "33", Severity.INFO: "36"}


def _emit_json(obj: object, out: TextIO) -> None:
    out.write(json.dumps(obj, ensure_ascii=False, sort_keys=False) + "\n")


# ---------------------------------------------------------------------------
# Loading


def _load(paths: Sequence[str]) -> Document:
    files = radl_files(paths)
    if not files:
        raise InputError(["no .radl files found in " + ", ".join(paths)], [{"message": "no .radl files found"}])
    try:
        return load(paths)
    except OSError as exc:
        name = exc.filename or ", ".join(paths)
        msg = f"{name}: cannot read: {exc.strerror or exc}"
        raise InputError([msg], [{"message": msg}]) from None
    except RADLSyntaxError as exc:
        lines = [str(e) for e in exc.errors]
        payload = [
            {
                "message": e.message,
                "file": e.span.file,
                "line": e.span.line_start,
                "col": e.span.col_start,
                "expected": e.expected,
                "rule": e.rule,
            }
            for e in exc.errors
        ]
        raise InputError(lines, payload) from None


def _load_resolved(paths: Sequence[str]) -> Document:
    doc = _load(paths)
    try:
        return resolve_links(doc)
    except ResolutionError as exc:
        raise InputError([str(d) for d in exc.diagnostics], [d.to_json() for d in exc.diagnostics]) from None


# ---------------------------------------------------------------------------
# Commands


def cmd_lint(args: argparse.Namespace, out: TextIO) -> int:
    diags = lint(_load(args.paths), args.profile)
    errors = sum(d.severity is Severity.ERROR for d in diags)
    warnings = sum(d.severity is Severity.WARNING for d in diags)
    if args.format == "json":
        _emit_json(
            {"profile": args.profile, "diagnostics": [d.to_json() for d in diags], "errors": errors, "warnings": warnings},
            out,
        )
    else:
        for d in diags:
            out.write(_format_diag(d, out) + "\n")
        out.write(f"{errors} error(s), {warnings} warning(s)\n")
    if errors:
        return EXIT_FINDINGS
    if warnings and args.strict:
        return EXIT_WARNINGS
    return EXIT_OK


def _format_diag(d: Diagnostic, out: TextIO) -> str:
    text = str(d)
    label = f"{d.severity.value} {d.rule_id}"
    return text.replace(label, _color(label, _SEVERITY_COLORS[d.severity], out), 1)


def read_raters(path: str) -> compliance.RaterMatrix:
    """CSV with a header row of rater ids and one row of 0/1/2 ratings per category."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if any(cell.strip() for cell in r)]
    except OSError as exc:
        raise InputError([f"{path}: cannot read: {exc.strerror or exc}"], [{"message": "cannot read rater file"}]) from None
    problem = None
    if len(rows) != len(compliance.CATEGORIES) + 1:
        problem = f"expected a header and {len(compliance.CATEGORIES)} rating rows, found {len(rows)} rows"
    else:
        try:
            ratings = [[int(c.strip()) for c in row] for row in rows[1:]]
            return compliance.RaterMatrix(ratings, tuple(c.strip() for c in rows[0]))
        except ValueError as exc:
            problem = str(exc)
    msg = f"{path}: invalid rater matrix: {problem}"
    raise InputError([msg], [{"message": msg}])


def cmd_score(args: argparse.Namespace, out: TextIO) -> int:
    if bool(args.profile) == bool(args.paths):
        raise UsageError("score takes either --profile or input paths")
    raters = read_raters(args.raters) if args.raters else None
    if args.profile:
        report = compliance.score_profile(args.profile)
    else:
        report = compliance.score_document(_load_resolved(args.paths))
    if raters is not None:
        report = report.with_raters(compliance.aggregate_raters(raters))
    if args.format == "json":
        _emit_json(report.to_json(), out)
    else:
        out.write(f"Annex IV addressability ({report.mode} mode, {report.basis} basis)\n")
        for c in report.categories:
            missing = f"  missing: {', '.join(c.missing)}" if c.missing else ""
            out.write(f"{c.index:>2}. {c.name:<40} {c.score}{missing}\n")
        out.write(f"total {report.total}/{compliance.MAX_TOTAL} ({report.addressability_percent}%, {report.basis})\n")
        if report.raters is not None:
            r = report.raters
            kappa = r.kappa.value if r.kappa else float("nan")
            flag = " (degenerate)" if r.kappa and r.kappa.degenerate else ""
            out.write(
                f"raters: mean total {r.mean_total:.2f} (sd {r.stddev_total:.2f}), "
                f"{r.mean_percent}% (mean basis), Fleiss kappa {kappa:.3f}{flag}\n"
            )
    if args.min_percent is not None and report.addressability_percent < args.min_percent:
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_concerns(args: argparse.Namespace, out: TextIO) -> int:
    statuses = compliance.concern_coverage(_load_resolved(args.paths), args.profile)
    full, partial = compliance.coverage_counts(statuses)
    if args.format == "json":
        _emit_json(
            {
                "profile": args.profile,
                "concerns": [{"concern": s.concern, "status": s.status} for s in statuses],
                "full": full,
                "partial": partial,
            },
            out,
        )
    else:
        for s in statuses:
            out.write(f"{s.status:<8} {s.concern}\n")
        out.write(f"fully + partially captured: {full} + {partial}\n")
    return EXIT_OK


def cmd_lineage(args: argparse.Namespace, out: TextIO) -> int:
    g = lineage.build_graph(_load_resolved(args.paths))
    if args.impact is not None:
        if args.impact not in g.nodes:
            raise UsageError(f"unknown lineage node {args.impact!r}")
        result: list = lineage.impact(g, args.impact)
        lines = result
    elif args.cycles:
        result = lineage.cycles(g)
        if result.truncated:
            sys.stderr.write(f"warning: cycle enumeration stopped after {lineage.MAX_CYCLES} cycles\n")
        lines = [" -> ".join([*c, c[0]]) for c in result]
    else:
        result = [list(e) for e in lineage.boundary_crossings(g)]
        lines = [f"{a} -> {b}" for a, b in result]
    if args.format == "json":
        _emit_json(result, out)
    else:
        for line in lines:
            out.write(f"{line}\n")
    return EXIT_OK


def cmd_diagram(args: argparse.Namespace, out: TextIO) -> int:
    doc = _load_resolved(args.paths)
    text = diagram.emit(doc, diagram.DiagramRequest(args.view, args.format, not args.no_risk_labels))
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError([f"{args.out}: cannot write: {exc.strerror or exc}"], []) from None
    else:
        out.write(text)
    return EXIT_OK


def scaffold(project_id: str) -> dict[str, str]:
    """File name to template text, one file per block kind."""
    files: dict[str, str] = {}
    for n, kind in enumerate(KINDS):
        name = f"{n:02d}-{kind.replace('.', '-')}.radl"
        lines = [HEADER, f"# {kind} blocks. Uncomment and fill in the placeholders.", ""]
        if kind == "meta":
            lines += [f'[meta "{project_id}"]', 'title = "Project title"']
        else:
            header = f"[{kind}]" if kind in ("e4.cell", "e8.ops", "c4.lineage") else f'[{kind} "example-id"]'
            lines.append(f"# {header}")
            lines += [f"# {key} = <{conv.expected}>" for key, _, conv in SCHEMAS[kind]]
        files[name] = "\n".join(lines) + "\n"
    return files


def cmd_init(args: argparse.Namespace, out: TextIO) -> int:
    target = Path(args.dir)
    project = re.sub(r"[^A-Za-z0-9._-]", "-", target.resolve().name).strip("-._") or "project"
    if not project[0].isalpha():
        project = f"p-{project}"
    files = scaffold(project)
    clashes = [name for name in files if (target / name).exists()]
    if clashes:
        raise InputError([f"{target / name}: already exists, not overwriting" for name in clashes], [])
    try:
        target.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (target / name).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError([f"{target}: cannot write: {exc.strerror or exc}"], []) from None
    if args.format == "json":
        _emit_json({"created": [str(target / n) for n in files]}, out)
    else:
        for name in files:
            out.write(f"created {target / name}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radai", description="Command-line checks and reports for AI-extended architecture documentation written in RADL.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help: str, default_format: str = "text") -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        if name != "diagram":
            p.add_argument("--format", choices=("text", "json"), default=default_format)
        return p

    p = command("init", "scaffold one template file per RADL block kind")
    p.add_argument("dir")
    p.set_defaults(func=cmd_init)

    p = command("lint", "check documentation against the structural rules")
    p.add_argument("paths", nargs="+")
    p.add_argument("--profile", choices=tuple(PROFILES), default="full")
    p.add_argument("--strict", action="store_true", help="exit 1 when only warnings are found")
    p.set_defaults(func=cmd_lint)

    p = command("score", "Annex IV addressability of a profile or a document")
    p.add_argument("paths", nargs="*")
    p.add_argument("--profile", choices=tuple(compliance.PROFILE_SCORES))
    p.add_argument("--raters", metavar="CSV")
    p.add_argument("--min-percent", type=int, metavar="N")
    p.set_defaults(func=cmd_score)

    p = command("concerns", "AI concern coverage")
    p.add_argument("paths", nargs="+")
    p.add_argument("--profile", choices=compliance.COVERAGE_PROFILES, default="radai")
    p.set_defaults(func=cmd_concerns)

    p = command("lineage", "impact, cycle and boundary-crossing queries", default_format="json")
    p.add_argument("paths", nargs="+")
    query = p.add_mutually_exclusive_group(required=True)
    query.add_argument("--impact", metavar="ID")
    query.add_argument("--cycles", action="store_true")
    query.add_argument("--crossings", action="store_true")
    p.set_defaults(func=cmd_lineage)

    p = command("diagram", "PlantUML or Graphviz views")
    p.add_argument("paths", nargs="+")
    p.add_argument("--view", choices=[v.value for v in diagram.View], default="component")
    p.add_argument("--format", choices=[f.value for f in diagram.Format], default="puml")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--no-risk-labels", action="store_true")
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"radai {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        if getattr(args, "format", "text") == "json" and exc.payload:
            _emit_json({"status": "invalid-input", "errors": exc.payload}, out)
        for line in exc.lines:
            sys.stderr.write(line + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
