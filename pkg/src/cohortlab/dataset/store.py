"""Columnar in-memory patient store.

One store holds a clinical table (one row per patient, numpy column per
field, NaN for missing), the per-patient blood-pressure series packed
into flat arrays with row offsets, and the clinical event list packed
the same way. Stores are immutable snapshots after construction: arrays
are marked read-only and every accessor returns copies or fresh objects,
so any number of readers can share one store.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from cohortlab.dataset.codebook import Codebook
from cohortlab.dataset.errors import (
    DatasetError,
    FormatError,
    IntegrityError,
    SchemaError,
    UnknownUid,
    raise_collected,
)

BP_SERIES = ("sbp", "dbp", "map")


@dataclass(frozen=True)
class BpMeasurement:
    uid: str
    t: float
    sbp: float
    dbp: float

    @property
    def map(self) -> float:
        """Mean arterial pressure: dbp + (sbp - dbp) / 3."""
        return self.dbp + (self.sbp - self.dbp) / 3.0


@dataclass(frozen=True)
class ClinicalEvent:
    uid: str
    kind: str
    t_start: float
    t_end: float | None = None

    @property
    def is_interval(self) -> bool:
        return self.t_end is not None


@dataclass(frozen=True)
class PatientRecord:
    """Row view of one patient's clinical values.

    Values are ``int`` codes for categorical fields, ``float`` for
    numeric fields, and ``None`` when missing.
    """

    uid: str
    clinical: dict


class PatientStore:
    """Immutable columnar snapshot of a loaded dataset.

    Construct through :func:`build_store` or :func:`~cohortlab.dataset.loader.load_dataset`;
    the raw constructor performs no validation.
    """

    def __init__(self, codebook, uids, columns, bp_offsets, bp_t, bp_sbp, bp_dbp,
                 ev_offsets, ev_kinds, ev_t_start, ev_t_end):
        self.codebook: Codebook = codebook
        self.uids: tuple[str, ...] = tuple(uids)
        self._uid_index = {u: i for i, u in enumerate(self.uids)}
        self._columns: dict[str, np.ndarray] = columns
        self._bp_offsets = bp_offsets
        self._bp_t = bp_t
        self._bp_sbp = bp_sbp
        self._bp_dbp = bp_dbp
        self._bp_map: np.ndarray | None = None
        self._ev_offsets = ev_offsets
        self._ev_kinds = ev_kinds
        self._ev_t_start = ev_t_start
        self._ev_t_end = ev_t_end
        for arr in (bp_offsets, bp_t, bp_sbp, bp_dbp, ev_offsets, ev_t_start, ev_t_end,
                    *columns.values()):
            arr.flags.writeable = False

    # -- basic accessors ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.uids)

    @property
    def n_patients(self) -> int:
        return len(self.uids)

    def __contains__(self, uid: str) -> bool:
        return uid in self._uid_index

    def row_of(self, uid: str) -> int:
        try:
            return self._uid_index[uid]
        except KeyError:
            raise UnknownUid(uid) from None

    def column(self, name: str) -> np.ndarray:
        """Clinical column as float64 with NaN for missing."""
        try:
            return self._columns[name]
        except KeyError:
            raise SchemaError(name, "no such clinical column") from None

    def value(self, uid: str, field: str):
        """One clinical value, typed per the field descriptor (None if missing)."""
        v = self.column(field)[self.row_of(uid)]
        if np.isnan(v):
            return None
        return int(v) if self.codebook.field(field).is_categorical else float(v)

    def record(self, uid: str) -> PatientRecord:
        row = self.row_of(uid)
        clinical = {}
        for fd in self.codebook.clinical_fields():
            v = self._columns[fd.name][row]
            if np.isnan(v):
                clinical[fd.name] = None
            else:
                clinical[fd.name] = int(v) if fd.is_categorical else float(v)
        return PatientRecord(uid=uid, clinical=clinical)

    # -- blood-pressure access --------------------------------------------

    def bp_slice(self, uid: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(t, sbp, dbp) array views for one patient, sorted by t."""
        row = self.row_of(uid)
        lo, hi = self._bp_offsets[row], self._bp_offsets[row + 1]
        return self._bp_t[lo:hi], self._bp_sbp[lo:hi], self._bp_dbp[lo:hi]

    def bp_series(self, uid: str) -> list[BpMeasurement]:
        t, s, d = self.bp_slice(uid)
        return [BpMeasurement(uid, float(a), float(b), float(c)) for a, b, c in zip(t, s, d)]

    def derive(self, uid: str, bp_type: str) -> list[tuple[float, float]]:
        """Per-point (t, value) series for one patient.

        ``sbp``/``dbp`` return the stored column; ``map`` is computed as
        dbp + (sbp - dbp) / 3 per point. Always sorted by t.
        """
        t, s, d = self.bp_slice(uid)
        if bp_type == "sbp":
            v = s
        elif bp_type == "dbp":
            v = d
        elif bp_type == "map":
            v = d + (s - d) / 3.0
        else:
            raise ValueError(f"unknown bp type {bp_type!r}")
        return [(float(a), float(b)) for a, b in zip(t, v)]

    # flat views used by the vectorized query evaluator / matrix builder

    @property
    def bp_offsets(self) -> np.ndarray:
        return self._bp_offsets

    @property
    def bp_t_flat(self) -> np.ndarray:
        return self._bp_t

    def bp_values_flat(self, series: str) -> np.ndarray:
        if series == "sbp":
            return self._bp_sbp
        if series == "dbp":
            return self._bp_dbp
        if series == "map":
            if self._bp_map is None:
                m = self._bp_dbp + (self._bp_sbp - self._bp_dbp) / 3.0
                m.flags.writeable = False
                self._bp_map = m
            return self._bp_map
        raise ValueError(f"unknown bp series {series!r}")

    @property
    def total_measurements(self) -> int:
        return int(self._bp_offsets[-1])

    # -- events ------------------------------------------------------------

    def events_for(self, uid: str) -> list[ClinicalEvent]:
        row = self.row_of(uid)
        lo, hi = self._ev_offsets[row], self._ev_offsets[row + 1]
        out = []
        for i in range(lo, hi):
            t_end = self._ev_t_end[i]
            out.append(ClinicalEvent(
                uid=uid,
                kind=self._ev_kinds[i],
                t_start=float(self._ev_t_start[i]),
                t_end=None if np.isnan(t_end) else float(t_end),
            ))
        return out

    @property
    def event_offsets(self) -> np.ndarray:
        return self._ev_offsets

    @property
    def event_kinds_flat(self) -> np.ndarray:
        return self._ev_kinds

    @property
    def event_t_start_flat(self) -> np.ndarray:
        return self._ev_t_start

    @property
    def event_t_end_flat(self) -> np.ndarray:
        """End times with NaN for point events."""
        return self._ev_t_end

    # -- equality (stores are pure functions of their input bytes) ---------

    def __eq__(self, other) -> bool:
        if not isinstance(other, PatientStore):
            return NotImplemented
        if self.codebook != other.codebook or self.uids != other.uids:
            return False
        if set(self._columns) != set(other._columns):
            return False
        for name, col in self._columns.items():
            if not np.array_equal(col, other._columns[name], equal_nan=True):
                return False
        return (
            np.array_equal(self._bp_offsets, other._bp_offsets)
            and np.array_equal(self._bp_t, other._bp_t)
            and np.array_equal(self._bp_sbp, other._bp_sbp)
            and np.array_equal(self._bp_dbp, other._bp_dbp)
            and np.array_equal(self._ev_offsets, other._ev_offsets)
            and list(self._ev_kinds) == list(other._ev_kinds)
            and np.array_equal(self._ev_t_start, other._ev_t_start)
            and np.array_equal(self._ev_t_end, other._ev_t_end, equal_nan=True)
        )


def build_store(
    codebook: Codebook,
    clinical_rows: Sequence[dict],
    bp_rows: Iterable[tuple],
    event_rows: Iterable[tuple],
    issues: list[DatasetError] | None = None,
) -> PatientStore:
    """Validate row-shaped input and pack it into a :class:`PatientStore`.

    ``clinical_rows``: dicts with a ``uid`` key plus one entry per clinical
    field (float or None). ``bp_rows``: (uid, t, sbp, dbp) tuples.
    ``event_rows``: (uid, kind, t_start, t_end_or_None) tuples.

    Violations are collected across the whole input; if any were found the
    first one is raised with the rest attached as ``issues``.
    """
    issues = issues if issues is not None else []

    clinical_names = [fd.name for fd in codebook.clinical_fields()]
    uids: list[str] = []
    uid_rows: dict[str, int] = {}

    seen_cols: set[str] = set()
    for row in clinical_rows:
        seen_cols.update(k for k in row if k != "uid")
    for col in sorted(seen_cols):
        if col not in clinical_names:
            issues.append(SchemaError(col, "clinical column has no codebook descriptor"))
    for name in clinical_names:
        if clinical_rows and name not in seen_cols:
            issues.append(SchemaError(name, "codebook descriptor has no clinical column"))

    for i, row in enumerate(clinical_rows):
        uid = str(row.get("uid", "")).strip()
        if not uid:
            issues.append(FormatError(i + 1, "missing uid", source="clinical"))
            continue
        if uid in uid_rows:
            issues.append(IntegrityError(uid, "duplicate uid in clinical table"))
            continue
        uid_rows[uid] = len(uids)
        uids.append(uid)

    n = len(uids)
    columns: dict[str, np.ndarray] = {name: np.full(n, np.nan) for name in clinical_names}
    for row in clinical_rows:
        uid = str(row.get("uid", "")).strip()
        r = uid_rows.get(uid)
        if r is None:
            continue
        for name in clinical_names:
            raw = row.get(name)
            if raw is None:
                continue
            fd = codebook.field(name)
            v = float(raw)
            if fd.is_categorical:
                if not float(v).is_integer():
                    issues.append(FormatError(
                        None, f"categorical field {name!r} got non-integer {raw!r} (uid {uid})"))
                    continue
                if int(v) not in fd.coding:
                    issues.append(FormatError(
                        None, f"code {int(v)} not in coding map of {name!r} (uid {uid})"))
                    continue
            if name == "age" and v < 0:
                issues.append(FormatError(None, f"negative age {v} (uid {uid})"))
                continue
            columns[name][r] = v

    # blood pressure: group per patient, sort by t, forbid duplicate stamps
    per_patient_bp: list[list[tuple[float, float, float]]] = [[] for _ in range(n)]
    for uid, t, sbp, dbp in bp_rows:
        uid = str(uid)
        r = uid_rows.get(uid)
        if r is None:
            issues.append(IntegrityError(uid, "bp row for uid not in clinical table"))
            continue
        t, sbp, dbp = float(t), float(sbp), float(dbp)
        if t < 0:
            issues.append(FormatError(None, f"negative timestamp {t} (uid {uid})"))
            continue
        if not (0 < dbp <= sbp):
            issues.append(FormatError(None, f"bp values violate 0 < dbp <= sbp: {sbp}/{dbp} (uid {uid})"))
            continue
        per_patient_bp[r].append((t, sbp, dbp))

    bp_offsets = np.zeros(n + 1, dtype=np.int64)
    bp_t, bp_sbp, bp_dbp = [], [], []
    for r in range(n):
        series = sorted(per_patient_bp[r], key=lambda m: m[0])
        for a, b in zip(series, series[1:]):
            if a[0] == b[0]:
                issues.append(IntegrityError(uids[r], f"duplicate bp timestamp {a[0]}"))
        for t, s, d in series:
            bp_t.append(t)
            bp_sbp.append(s)
            bp_dbp.append(d)
        bp_offsets[r + 1] = len(bp_t)

    # events
    per_patient_ev: list[list[tuple[float, str, float | None]]] = [[] for _ in range(n)]
    for uid, kind, t_start, t_end in event_rows:
        uid = str(uid)
        r = uid_rows.get(uid)
        if r is None:
            issues.append(IntegrityError(uid, "event row for uid not in clinical table"))
            continue
        t_start = float(t_start)
        if t_start < 0:
            issues.append(FormatError(None, f"negative event start {t_start} (uid {uid})"))
            continue
        if t_end is not None:
            t_end = float(t_end)
            if t_end < t_start:
                issues.append(FormatError(
                    None, f"event interval ends before it starts: [{t_start}, {t_end}] (uid {uid})"))
                continue
        canonical = codebook.canonical_event_kind(str(kind))
        per_patient_ev[r].append((t_start, canonical if canonical else str(kind), t_end))

    ev_offsets = np.zeros(n + 1, dtype=np.int64)
    ev_kinds_list: list[str] = []
    ev_t_start, ev_t_end = [], []
    for r in range(n):
        for t0, kind, t1 in sorted(per_patient_ev[r], key=lambda e: e[0]):
            ev_kinds_list.append(kind)
            ev_t_start.append(t0)
            ev_t_end.append(np.nan if t1 is None else t1)
        ev_offsets[r + 1] = len(ev_kinds_list)

    raise_collected(issues)

    return PatientStore(
        codebook=codebook,
        uids=uids,
        columns=columns,
        bp_offsets=bp_offsets,
        bp_t=np.asarray(bp_t, dtype=float),
        bp_sbp=np.asarray(bp_sbp, dtype=float),
        bp_dbp=np.asarray(bp_dbp, dtype=float),
        ev_offsets=ev_offsets,
        ev_kinds=np.asarray(ev_kinds_list, dtype=object),
        ev_t_start=np.asarray(ev_t_start, dtype=float),
        ev_t_end=np.asarray(ev_t_end, dtype=float),
    )
