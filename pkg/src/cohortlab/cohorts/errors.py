"""Cohort tree and session errors."""

from __future__ import annotations


class CohortError(Exception):
    """Base class for cohort tree errors."""


class UnknownParent(CohortError):
    def __init__(self, parent_id: str):
        super().__init__(f"no cohort with id {parent_id!r} to attach to")
        self.parent_id = parent_id


class UnknownCohort(CohortError):
    def __init__(self, cohort_id: str):
        super().__init__(f"no cohort with id {cohort_id!r}")
        self.cohort_id = cohort_id


class ReplayError(CohortError):
    """A stored session record no longer replays against the store."""

    def __init__(self, record: dict, reason: str):
        super().__init__(f"cannot replay {record.get('op')} record {record.get('id')!r}: {reason}")
        self.record = record
        self.reason = reason


class EmptyCohortWarning(UserWarning):
    """A freshly created cohort matched no patients.

    The node is still created: zero-match queries are informative and
    must stay visible in the tree.
    """
