"""Source locations and lint findings shared by every stage of the toolchain."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True, order=True)
class SourceSpan:
    """A 1-based, inclusive region of one source file."""

    file: str
    line_start: int
    col_start: int
    line_end: int
    col_end: int

    def __post_init__(self) -> None:
        if self.line_start < 1 or self.col_start < 1:
            raise ValueError("span positions are 1-based")
        if (self.line_end, self.col_end) < (self.line_start, self.col_start):
            raise ValueError("span ends before it starts")

    @classmethod
    def point(cls, file: str, line: int, col: int = 1) -> SourceSpan:
        return cls(file, line, col, line, col)

    def __str__(self) -> str:
        return f"{self.file}:{self.line_start}:{self.col_start}"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True)
class Diagnostic:
    """One lint or resolution finding.

    ``subject`` is the identifier of the entity the finding is about (for
    edges ``"a->b"``, for concern cells ``"component/concern"``).
    """

    rule_id: str
    severity: Severity
    message: str
    span: SourceSpan | None
    subject: str

    def sort_key(self) -> tuple:
        span = self.span
        file, line, col = (span.file, span.line_start, span.col_start) if span else ("", 0, 0)
        return (file, line, self.rule_id, col, self.subject, self.message)

    def to_json(self) -> dict:
        span = self.span
        return {
            "rule": self.rule_id,
            "severity": self.severity.value,
            "message": self.message,
            "file": span.file if span else None,
            "line": span.line_start if span else None,
            "col": span.col_start if span else None,
            "subject": self.subject,
        }

    def __str__(self) -> str:
        where = str(self.span) if self.span else "<memory>"
        return f"{where}: {self.severity.value} {self.rule_id} [{self.subject}] {self.message}"
