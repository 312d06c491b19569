"""Query language errors.

ParseError carries a byte offset into the source text plus what the
parser would have accepted there; typecheck errors each carry the
details a caller needs to render a correction hint (and they feed the
LLM repair loop verbatim).
"""

from __future__ import annotations


class QueryError(Exception):
    """Base class for all query-language errors."""


class ParseError(QueryError):
    def __init__(self, offset: int, expected_tokens: list[str], found: str):
        expected = ", ".join(expected_tokens)
        super().__init__(f"at byte {offset}: expected {expected}, found {found}")
        self.offset = offset
        self.expected_tokens = list(expected_tokens)
        self.found = found


class TypecheckError(QueryError):
    """Base for errors raised while resolving an AST against a codebook."""

    kind = "typecheck"


class MissingField(TypecheckError):
    kind = "missing_field"

    def __init__(self, name: str, suggestions: list[str] | None = None):
        self.name = name
        self.suggestions = list(suggestions or [])
        hint = f" (did you mean: {', '.join(self.suggestions)}?)" if self.suggestions else ""
        super().__init__(f"unknown field {name!r}{hint}")


class TypeMismatch(TypecheckError):
    kind = "type_mismatch"

    def __init__(self, field: str, expected: str, got: str):
        self.field = field
        self.expected = expected
        self.got = got
        super().__init__(f"field {field!r}: expected {expected}, got {got}")


class UnknownEventKind(TypecheckError):
    kind = "unknown_event_kind"

    def __init__(self, event_kind: str, known: list[str] | None = None):
        self.event_kind = event_kind
        self.known = list(known or [])
        hint = f" (known kinds: {', '.join(self.known)})" if self.known else ""
        super().__init__(f"unknown event kind {event_kind!r}{hint}")


class UnknownLabel(TypecheckError):
    kind = "unknown_label"

    def __init__(self, field: str, label: str, known: list[str] | None = None):
        self.field = field
        self.label = label
        self.known = list(known or [])
        hint = f" (known labels: {', '.join(self.known)})" if self.known else ""
        super().__init__(f"field {field!r} has no label {label!r}{hint}")
