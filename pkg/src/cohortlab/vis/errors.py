"""Visualization model errors."""

from __future__ import annotations


class VisError(Exception):
    pass


class UnknownSortKey(VisError):
    def __init__(self, text: str, reason: str = ""):
        self.text = text
        self.reason = reason
        suffix = f": {reason}" if reason else ""
        super().__init__(f"unknown sort key {text!r}{suffix}")


class UnknownOutcomeKey(VisError):
    def __init__(self, field: str, reason: str = ""):
        self.field = field
        self.reason = reason
        suffix = f": {reason}" if reason else ""
        super().__init__(f"unknown outcome key {field!r}{suffix}")
