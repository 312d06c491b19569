"""Wrangler failure modes.

Every failure carries the trace assembled so far so callers can show
what the model did before giving up (failed requests are informative,
not swallowed).
"""

from __future__ import annotations

MISSING_FIELD = "missing_field"
UNPARSEABLE = "unparseable"
PROVIDER_FAILURE = "provider_failure"

KINDS = (MISSING_FIELD, UNPARSEABLE, PROVIDER_FAILURE)


class WranglerError(Exception):
    """Pipeline failure with a machine-readable kind.

    ``concept`` is set for missing_field: the domain concept the request
    needs but the schema cannot express (either declared by the model or
    the unresolvable field name after repairs ran out).
    """

    def __init__(self, kind: str, explanation: str, trace=None, concept: str | None = None):
        if kind not in KINDS:
            raise ValueError(f"unknown wrangler error kind {kind!r}")
        super().__init__(explanation)
        self.kind = kind
        self.explanation = explanation
        self.trace = trace
        self.concept = concept

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "explanation": self.explanation,
            "concept": self.concept,
            "trace": self.trace.to_json() if self.trace is not None else None,
        }


class ProviderError(Exception):
    """Raised by providers on transport or fixture problems; the
    pipeline wraps it into a provider_failure WranglerError."""
