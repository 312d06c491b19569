"""Patient ordering for the abstraction matrix and cohort member lists.

Three key families:

* ``clinical:<field>`` — a clinical column value;
* ``window_mean:<bpType>:<n>`` — the patient's mean BP over the nth
  cycle window (the window index is an explicit parameter);
* ``outcome:<field>`` — an outcome score (also drives the row band).

Missing sort values always sink to the end regardless of direction and
ties break by uid ascending, so every ordering is total and
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from cohortlab.vis.config import is_bandable
from cohortlab.vis.errors import UnknownOutcomeKey, UnknownSortKey


@dataclass(frozen=True)
class ClinicalFieldKey:
    field: str

    def text(self) -> str:
        return f"clinical:{self.field}"


@dataclass(frozen=True)
class WindowMeanKey:
    bp_type: str
    window_index: int

    def text(self) -> str:
        return f"window_mean:{self.bp_type}:{self.window_index}"


@dataclass(frozen=True)
class OutcomeKey:
    field: str

    def text(self) -> str:
        return f"outcome:{self.field}"


SortKey = Union[ClinicalFieldKey, WindowMeanKey, OutcomeKey]


def parse_sort_key(text: str, codebook) -> SortKey:
    parts = text.split(":")
    if parts[0] == "clinical" and len(parts) == 2:
        key = ClinicalFieldKey(parts[1])
    elif parts[0] == "window_mean" and len(parts) == 3:
        if parts[1] not in ("sbp", "dbp", "map"):
            raise UnknownSortKey(text, f"unknown bp type {parts[1]!r}")
        try:
            n = int(parts[2])
        except ValueError:
            raise UnknownSortKey(text, "window index must be an integer") from None
        if n < 0:
            raise UnknownSortKey(text, "window index must be >= 0")
        key = WindowMeanKey(parts[1], n)
    elif parts[0] == "outcome" and len(parts) == 2:
        key = OutcomeKey(parts[1])
    else:
        raise UnknownSortKey(text, "expected clinical:<field>, "
                             "window_mean:<bpType>:<n>, or outcome:<field>")
    validate_sort_key(key, codebook)
    return key


def validate_sort_key(key: SortKey, codebook) -> None:
    if isinstance(key, (ClinicalFieldKey, OutcomeKey)):
        fd = codebook.get(key.field)
        if fd is None or fd.table != "clinical":
            raise UnknownSortKey(key.text(), f"no clinical field {key.field!r}")
        if isinstance(key, OutcomeKey) and not is_bandable(key.field):
            raise UnknownOutcomeKey(key.field, "no band definition for this field")


def sort_value(store, uid: str, key: SortKey, cycle_hours: float = 24.0):
    """The patient's sort value under the key, or None when missing."""
    if isinstance(key, (ClinicalFieldKey, OutcomeKey)):
        v = store.value(uid, key.field)
        return None if v is None else float(v)
    if isinstance(key, WindowMeanKey):
        lo = key.window_index * cycle_hours
        hi = lo + cycle_hours
        values = [v for t, v in store.derive(uid, key.bp_type) if lo <= t < hi]
        return float(sum(values) / len(values)) if values else None
    raise UnknownSortKey(repr(key))


def order_uids(store, uids, key: SortKey, direction: str = "asc",
               cycle_hours: float = 24.0) -> list[str]:
    """Total order over the uids; see module docstring for the rules."""
    if direction not in ("asc", "desc"):
        raise ValueError(f"direction must be 'asc' or 'desc', got {direction!r}")
    values = {uid: sort_value(store, uid, key, cycle_hours) for uid in uids}
    present = [u for u in uids if values[u] is not None]
    missing = sorted(u for u in uids if values[u] is None)
    if direction == "asc":
        present.sort(key=lambda u: (values[u], u))
    else:
        present.sort(key=lambda u: (-values[u], u))
    return present + missing


def sort_values_map(store, uids, key: SortKey, cycle_hours: float = 24.0) -> dict:
    return {uid: sort_value(store, uid, key, cycle_hours) for uid in uids}
