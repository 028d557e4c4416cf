"""Diagnostic records and the error-code registry.

Every checker stage reports problems exclusively through `Diagnostic`
values; nothing raises for user-facing errors.  Codes are stable so that
tests (and editors) can match on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceSpan:
    """A half-open-feeling but inclusive 1-based source region."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        assert self.start_line >= 1 and self.start_col >= 1
        assert (self.end_line, self.end_col) >= (self.start_line, self.start_col)

    def __str__(self):
        return f"{self.file}:{self.start_line}:{self.start_col}"


# Single source of truth for codes.  Exxx are errors, Wxxx warnings.
CODES = {
    # syntax
    "E001": "unterminated string literal",
    "E002": "illegal character",
    "E003": "unexpected token",
    "E004": "duplicate declaration name",
    # resolution
    "E010": "unresolved reference",
    "E011": "duplicate variable assignment",
    "E012": "unknown member",
    # types
    "E020": "argument type mismatch",
    "E021": "non-constant argument for refined parameter",
    "E022": "refined constraint violated",
    "E050": "wrong arity or unknown named parameter",
    "E051": "assignee/result count mismatch",
    "E052": "type-argument unification failure",
    "E060": "internal: unresolved node reached code generation",
    # schema
    "E030": "referenced column absent",
    "E031": "column type mismatch",
    "E032": "unreadable or empty data file",
    "E033": "duplicate header name",
    "E034": "ragged row",
    "E035": "non-constant schema-relevant argument",
    "E036": "column already exists",
    "E037": "unknown dataset key",
    "W001": "unknown schema; downstream schema checks skipped",
    # protocol
    "E040": "protocol violation",
    "E041": "protocol token is not a declared method",
    "E042": "protocol object rebound to another variable",
    # graph
    "E070": "construct has no graph form",
    "E071": "cycle detected in graph document",
    "E072": "edge type incompatible with port",
    "E073": "unknown process name",
    "E074": "malformed graph document",
    # stubgen
    "E080": "unparseable def",
    "W080": "skipped unparseable def",
    "W081": "skipped nested declaration",
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: SourceSpan
    severity: str = "error"
    related_spans: tuple = field(default=(), compare=False)

    def __post_init__(self):
        assert self.code in CODES, f"unknown diagnostic code {self.code}"
        assert self.message
        assert self.severity in ("error", "warning")

    @property
    def is_error(self):
        return self.severity == "error"

    def render(self):
        kind = "error" if self.is_error else "warning"
        return f"{self.span}: {kind}[{self.code}]: {self.message}"

    def to_json(self):
        return {
            "code": self.code,
            "severity": self.severity,
            "message": self.message,
            "file": self.span.file,
            "startLine": self.span.start_line,
            "startCol": self.span.start_col,
            "endLine": self.span.end_line,
            "endCol": self.span.end_col,
        }


def error(code, message, span):
    return Diagnostic(code, message, span)


def warning(code, message, span):
    return Diagnostic(code, message, span, severity="warning")


def sort_key(d: Diagnostic):
    return (d.span.file, d.span.start_line, d.span.start_col, d.code)
