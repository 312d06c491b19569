"""Cohort refinement tree, group summaries, and session persistence."""

from .errors import (
    CohortError,
    EmptyCohortWarning,
    ReplayError,
    UnknownCohort,
    UnknownParent,
)
from .session import load_session, save_session
from .tree import CohortNode, CohortTree

__all__ = [
    "CohortError",
    "CohortNode",
    "CohortTree",
    "EmptyCohortWarning",
    "ReplayError",
    "UnknownCohort",
    "UnknownParent",
    "load_session",
    "save_session",
]
