"""Folded abstraction matrix: per-patient per-window BP means with
category colors and density opacity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cohortlab.dataset.store import PatientStore
from cohortlab.vis.config import FoldConfig, outcome_band
from cohortlab.vis.errors import UnknownOutcomeKey
from cohortlab.vis.sortkeys import (
    OutcomeKey,
    SortKey,
    order_uids,
    sort_value,
    validate_sort_key,
)


@dataclass(frozen=True)
class MatrixCell:
    mean_value: float
    count: int
    category_name: str
    alpha: float


@dataclass(frozen=True)
class MatrixRow:
    uid: str
    outcome_band: str
    sort_value: float | None


@dataclass
class MatrixModel:
    rows: list[MatrixRow]
    n_windows: int
    cells: dict[tuple[int, int], MatrixCell]
    config: FoldConfig

    def to_json(self) -> dict:
        cells = [
            {
                "row": row,
                "window": window,
                "meanValue": cell.mean_value,
                "count": cell.count,
                "categoryName": cell.category_name,
                "alpha": cell.alpha,
            }
            for (row, window), cell in sorted(self.cells.items())
        ]
        return {
            "rows": [
                {"uid": r.uid, "outcomeBand": r.outcome_band, "sortValue": r.sort_value}
                for r in self.rows
            ],
            "nWindows": self.n_windows,
            "cells": cells,
            "config": self.config.to_json(),
        }


def _resolve_outcome_key(outcome_key, codebook) -> OutcomeKey:
    key = OutcomeKey(outcome_key) if isinstance(outcome_key, str) else outcome_key
    fd = codebook.get(key.field)
    if fd is None or fd.table != "clinical":
        raise UnknownOutcomeKey(key.field, "no such clinical field")
    validate_sort_key(key, codebook)
    return key


def build_matrix(store: PatientStore, uids, cfg: FoldConfig, sort_key: SortKey,
                 outcome_key, direction: str = "asc",
                 cycle_filter: tuple[float, float] | None = None) -> MatrixModel:
    """Aggregate each member's series into cycle windows.

    ``cycle_filter`` = (lo, hi) drops measurements whose in-cycle time
    falls outside [lo, hi) before aggregation (the brush over the
    cycle-time distribution acts on measurements, not on columns).
    """
    validate_sort_key(sort_key, store.codebook)
    out_key = _resolve_outcome_key(outcome_key, store.codebook)
    c = cfg.cycle_hours

    ordered = order_uids(store, uids, sort_key, direction, cycle_hours=c)
    rows = [
        MatrixRow(
            uid=uid,
            outcome_band=outcome_band(out_key.field, store.value(uid, out_key.field)),
            sort_value=sort_value(store, uid, sort_key, cycle_hours=c),
        )
        for uid in ordered
    ]

    v_flat_all = store.bp_values_flat(cfg.bp_type)
    t_flat_all = store.bp_t_flat
    off = store.bp_offsets
    t_parts, v_parts, counts = [], [], []
    for uid in ordered:
        r = store.row_of(uid)
        lo, hi = off[r], off[r + 1]
        t_parts.append(t_flat_all[lo:hi])
        v_parts.append(v_flat_all[lo:hi])
        counts.append(int(hi - lo))

    if not ordered or sum(counts) == 0:
        return MatrixModel(rows=rows, n_windows=0, cells={}, config=cfg)

    t = np.concatenate(t_parts)
    v = np.concatenate(v_parts)
    row_idx = np.repeat(np.arange(len(ordered)), counts)

    if cycle_filter is not None:
        lo, hi = cycle_filter
        tic = t - np.floor(t / c) * c
        keep = (tic >= lo) & (tic < hi)
        t, v, row_idx = t[keep], v[keep], row_idx[keep]
        if t.size == 0:
            return MatrixModel(rows=rows, n_windows=0, cells={}, config=cfg)

    seg = np.floor(t / c).astype(np.int64)
    n_windows = int(seg.max()) + 1

    key = row_idx * n_windows + seg
    minlength = len(ordered) * n_windows
    cell_counts = np.bincount(key, minlength=minlength)
    cell_sums = np.bincount(key, weights=v, minlength=minlength)

    legend = cfg.effective_legend()
    bounds = np.asarray([e.upper_bound for e in legend[:-1]])

    present = np.nonzero(cell_counts)[0]
    means = cell_sums[present] / cell_counts[present]
    cat_idx = np.searchsorted(bounds, means, side="right")
    floor = cfg.opacity_floor
    alphas = floor + (1 - floor) * np.minimum(1.0, cell_counts[present] / cfg.opacity_ref_count)

    cells = {}
    for k, mean, ci, alpha, count in zip(
            present, means, cat_idx, alphas, cell_counts[present]):
        row, window = divmod(int(k), n_windows)
        cells[(row, window)] = MatrixCell(
            mean_value=float(mean),
            count=int(count),
            category_name=legend[int(ci)].name,
            alpha=float(alpha),
        )
    return MatrixModel(rows=rows, n_windows=n_windows, cells=cells, config=cfg)
