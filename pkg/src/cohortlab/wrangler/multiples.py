"""Per-field before/after distributions for inspecting a derived query.

One spec per involved field, in query order, each comparing the parent
population against the filtered cohort. Only aggregated counts leave
this module; no raw rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..query.ast import BP_SERIES, ExistsBp, HasEvent, Window, walk
from ..query.typecheck import TypedQuery

N_BINS = 20

# ops whose satisfying witness is the largest value in the window; the
# rest are served by the smallest
_MAX_OPS = {">", ">=", "==", "!="}


@dataclass
class SmallMultipleSpec:
    """Aggregated distribution of one field, pre- and post-filter.

    kind "histogram": bin_edges has len(counts)+1 entries.
    kind "bar": categories aligns 1:1 with the count lists.
    """

    field: str
    kind: str
    title: str
    pre_counts: list[int]
    post_counts: list[int]
    pre_missing: int
    post_missing: int
    bin_edges: list[float] | None = None
    categories: list[dict] | None = None

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "kind": self.kind,
            "title": self.title,
            "binEdges": self.bin_edges,
            "categories": self.categories,
            "preCounts": self.pre_counts,
            "postCounts": self.post_counts,
            "preMissing": self.pre_missing,
            "postMissing": self.post_missing,
        }


def _edges(values: np.ndarray) -> np.ndarray:
    if values.size == 0:
        return np.linspace(0.0, 1.0, N_BINS + 1)
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return np.linspace(lo, hi, N_BINS + 1)


def _clinical_values(store, uids: list[str], field: str) -> np.ndarray:
    col = store.column(field)
    rows = np.array([store.row_of(u) for u in uids], dtype=np.intp)
    return col[rows] if rows.size else np.empty(0)


def _numeric_spec(store, field: str, parent: list[str], cohort: list[str]) -> SmallMultipleSpec:
    pre = _clinical_values(store, parent, field)
    post = _clinical_values(store, cohort, field)
    pre_ok, post_ok = pre[~np.isnan(pre)], post[~np.isnan(post)]
    edges = _edges(pre_ok)
    return SmallMultipleSpec(
        field=field,
        kind="histogram",
        title=field,
        bin_edges=[float(e) for e in edges],
        pre_counts=np.histogram(pre_ok, bins=edges)[0].tolist(),
        post_counts=np.histogram(post_ok, bins=edges)[0].tolist(),
        pre_missing=int(np.isnan(pre).sum()),
        post_missing=int(np.isnan(post).sum()),
    )


def _bar_counts(values: np.ndarray, codes: list[int]) -> list[int]:
    return [int(np.sum(values == c)) for c in codes]


def _categorical_spec(store, fd, parent: list[str], cohort: list[str]) -> SmallMultipleSpec:
    pre = _clinical_values(store, parent, fd.name)
    post = _clinical_values(store, cohort, fd.name)
    codes = sorted(fd.coding)
    return SmallMultipleSpec(
        field=fd.name,
        kind="bar",
        title=fd.name,
        categories=[{"code": c, "label": fd.coding[c]} for c in codes],
        pre_counts=_bar_counts(pre, codes),
        post_counts=_bar_counts(post, codes),
        pre_missing=int(np.isnan(pre).sum()),
        post_missing=int(np.isnan(post).sum()),
    )


def _window_extrema(store, uids: list[str], series: str, window: Window, use_max: bool):
    """Per-patient extremum of the series inside the window; None when
    the patient has no measurement there."""
    out = []
    for uid in uids:
        vals = [v for t, v in store.derive(uid, series) if window.lo <= t < window.hi]
        if vals:
            out.append(max(vals) if use_max else min(vals))
        else:
            out.append(None)
    return out


def _exists_spec(store, series: str, node: ExistsBp, parent, cohort) -> SmallMultipleSpec:
    use_max = node.op in _MAX_OPS
    pre_raw = _window_extrema(store, parent, series, node.window, use_max)
    post_raw = _window_extrema(store, cohort, series, node.window, use_max)
    pre_ok = np.array([v for v in pre_raw if v is not None], dtype=float)
    post_ok = np.array([v for v in post_raw if v is not None], dtype=float)
    edges = _edges(pre_ok)
    word = "max" if use_max else "min"
    return SmallMultipleSpec(
        field=series,
        kind="histogram",
        title=f"bp.{series} {word} in hours({node.window.lo:g},{node.window.hi:g})",
        bin_edges=[float(e) for e in edges],
        pre_counts=np.histogram(pre_ok, bins=edges)[0].tolist(),
        post_counts=np.histogram(post_ok, bins=edges)[0].tolist(),
        pre_missing=sum(v is None for v in pre_raw),
        post_missing=sum(v is None for v in post_raw),
    )


def _has_kind(store, uid: str, kind: str, window: Window | None) -> bool:
    for ev in store.events_for(uid):
        if ev.kind != kind:
            continue
        if window is None:
            return True
        t_end = ev.t_end if ev.t_end is not None else ev.t_start
        if ev.t_start < window.hi and t_end >= window.lo:
            return True
    return False


def _event_spec(store, kind: str, window: Window | None, parent, cohort) -> SmallMultipleSpec:
    pre_present = sum(_has_kind(store, u, kind, window) for u in parent)
    post_present = sum(_has_kind(store, u, kind, window) for u in cohort)
    title = f"event {kind}"
    if window is not None:
        title += f" in hours({window.lo:g},{window.hi:g})"
    return SmallMultipleSpec(
        field=kind,
        kind="bar",
        title=title,
        categories=[{"code": 1, "label": "present"}, {"code": 0, "label": "absent"}],
        pre_counts=[pre_present, len(parent) - pre_present],
        post_counts=[post_present, len(cohort) - post_present],
        pre_missing=0,
        post_missing=0,
    )


def small_multiples(
    query: TypedQuery, parent_uids, cohort_uids, store
) -> list[SmallMultipleSpec]:
    """Build one spec per involved field, in query order."""
    parent_set = set(parent_uids)
    if not set(cohort_uids) <= parent_set:
        raise ValueError("cohort uids must be a subset of parent uids")
    parent = sorted(parent_set)
    cohort = sorted(set(cohort_uids))

    first_exists: dict[str, ExistsBp] = {}
    first_event: dict[str, HasEvent] = {}
    for node in walk(query.ast):
        if isinstance(node, ExistsBp):
            first_exists.setdefault(node.series, node)
        elif isinstance(node, HasEvent):
            first_event.setdefault(node.kind, node)

    specs = []
    for name in query.involved_fields:
        fd = store.codebook.get(name)
        if fd is not None and fd.table == "clinical":
            if fd.is_categorical:
                specs.append(_categorical_spec(store, fd, parent, cohort))
            else:
                specs.append(_numeric_spec(store, name, parent, cohort))
        elif name in BP_SERIES and name in first_exists:
            specs.append(_exists_spec(store, name, first_exists[name], parent, cohort))
        elif name in first_event:
            node = first_event[name]
            specs.append(_event_spec(store, name, node.window, parent, cohort))
    return specs
