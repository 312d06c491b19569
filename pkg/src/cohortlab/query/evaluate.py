"""Vectorized query evaluation over a PatientStore.

Every node maps to a boolean mask over the patient rows; temporal
predicates reduce flat per-measurement masks to per-patient "any"
via prefix sums over the store's row offsets. Missing clinical values
never satisfy a comparison (== and != both give false on missing; a
wrapping not therefore gives true).
"""

from __future__ import annotations

import numpy as np

from cohortlab.dataset.store import PatientStore
from cohortlab.query.ast import (
    And,
    BoolLit,
    Compare,
    ExistsBp,
    HasEvent,
    In,
    Node,
    Not,
    Or,
)
from cohortlab.query.typecheck import TypedQuery

_OPS = {
    "==": np.equal,
    "!=": np.not_equal,
    "<": np.less,
    "<=": np.less_equal,
    ">": np.greater,
    ">=": np.greater_equal,
}


def _any_per_row(mask: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Per-patient OR of a flat mask whose rows are delimited by offsets."""
    c = np.concatenate(([0], np.cumsum(mask, dtype=np.int64)))
    return (c[offsets[1:]] - c[offsets[:-1]]) > 0


def _eval(node: Node, store: PatientStore) -> np.ndarray:
    n = len(store)
    if isinstance(node, BoolLit):
        return np.full(n, node.value, dtype=bool)
    if isinstance(node, Compare):
        col = store.column(node.field)
        mask = _OPS[node.op](col, node.value)
        if node.op == "!=":
            # NaN != x is true in IEEE terms but missing must not match
            mask &= ~np.isnan(col)
        return mask
    if isinstance(node, In):
        col = store.column(node.field)
        return np.isin(col, np.asarray(node.values, dtype=float))
    if isinstance(node, ExistsBp):
        t = store.bp_t_flat
        v = store.bp_values_flat(node.series)
        mask = (t >= node.window.lo) & (t < node.window.hi)
        mask &= _OPS[node.op](v, node.threshold)
        return _any_per_row(mask, store.bp_offsets)
    if isinstance(node, HasEvent):
        kinds = store.event_kinds_flat
        mask = kinds == node.kind
        if node.window is not None:
            t0 = store.event_t_start_flat
            t1 = store.event_t_end_flat
            t1_eff = np.where(np.isnan(t1), t0, t1)
            # [t0, t1_eff] intersects [lo, hi) iff t0 < hi and t1_eff >= lo
            mask = mask & (t0 < node.window.hi) & (t1_eff >= node.window.lo)
        return _any_per_row(mask, store.event_offsets)
    if isinstance(node, Not):
        return ~_eval(node.child, store)
    if isinstance(node, And):
        out = _eval(node.children[0], store)
        for child in node.children[1:]:
            out = out & _eval(child, store)
        return out
    if isinstance(node, Or):
        out = _eval(node.children[0], store)
        for child in node.children[1:]:
            out = out | _eval(child, store)
        return out
    raise TypeError(f"not a query node: {node!r}")


def evaluate(query: TypedQuery | Node, store: PatientStore,
             base_uids=None) -> set[str]:
    """Uids satisfying the query, restricted to ``base_uids`` when given."""
    node = query.ast if isinstance(query, TypedQuery) else query
    mask = _eval(node, store)
    if base_uids is not None:
        base_mask = np.zeros(len(store), dtype=bool)
        for uid in base_uids:
            if uid in store:
                base_mask[store.row_of(uid)] = True
        mask = mask & base_mask
    return {store.uids[i] for i in np.nonzero(mask)[0]}
