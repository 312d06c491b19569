"""Dataset-level error types.

Loading collects every violation it finds before failing; the raised
exception is the first violation with the full list attached as
``issues`` so callers can report all of them at once.
"""

from __future__ import annotations


class DatasetError(Exception):
    """Base class for dataset ingestion and access errors."""

    #: All violations found in the same load, including this one.
    issues: list["DatasetError"]

    def __init__(self, message: str):
        super().__init__(message)
        self.issues = [self]


class FormatError(DatasetError):
    """A cell or row could not be interpreted (bad number, bad range...)."""

    def __init__(self, line: int | None, reason: str, source: str | None = None):
        where = f"{source or 'input'}:{line}" if line is not None else (source or "input")
        super().__init__(f"{where}: {reason}")
        self.line = line
        self.reason = reason
        self.source = source


class SchemaError(DatasetError):
    """A column has no codebook descriptor, or a descriptor has no column."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"field {field!r}: {reason}")
        self.field = field
        self.reason = reason


class IntegrityError(DatasetError):
    """Cross-table violation tied to one patient (orphan rows, duplicate
    uid, duplicate BP timestamps)."""

    def __init__(self, uid: str, reason: str):
        super().__init__(f"uid {uid!r}: {reason}")
        self.uid = uid
        self.reason = reason


class UnknownUid(DatasetError):
    """Lookup of a uid that is not in the store."""

    def __init__(self, uid: str):
        super().__init__(f"unknown uid {uid!r}")
        self.uid = uid


def raise_collected(issues: list[DatasetError]) -> None:
    """Raise the first issue with the full list attached, if any."""
    if issues:
        first = issues[0]
        first.issues = list(issues)
        raise first
