"""Cohort refinement tree.

Each node narrows its parent: the node's predicate is conjoined with
every ancestor predicate, and memberships are materialized eagerly
(the store is immutable, so they never go stale). The tree keeps an
append-only operation log from which sessions are saved and replayed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from ..dataset.stats import descriptive_stats
from ..query import And, evaluate, print_query
from ..query.ast import Node
from ..query.typecheck import TypedQuery
from ..vis.sortkeys import SortKey, order_uids, parse_sort_key
from ..wrangler.trace import WranglerTrace
from .errors import EmptyCohortWarning, UnknownCohort, UnknownParent

# group-view BP histograms: fixed 5-mmHg bins spanning [40, 260);
# out-of-range measurements land in the terminal bins
HIST_LO = 40.0
HIST_HI = 260.0
HIST_STEP = 5.0
N_HIST_BINS = int((HIST_HI - HIST_LO) / HIST_STEP)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def _conjoin(parent_ast: Node | None, child_ast: Node) -> Node:
    if parent_ast is None:
        return child_ast
    if isinstance(parent_ast, And):
        return And(parent_ast.children + (child_ast,))
    return And((parent_ast, child_ast))


@dataclass(frozen=True)
class CohortNode:
    id: str
    name: str
    parent_id: str | None
    typed: TypedQuery
    effective_ast: Node
    member_uids: frozenset[str]
    trace: WranglerTrace | None
    created_at: str

    @property
    def query_text(self) -> str:
        """This node's own refinement predicate."""
        return self.typed.source_text

    @property
    def effective_query(self) -> str:
        """Conjunction of every ancestor predicate and this node's own."""
        return print_query(self.effective_ast)

    def to_json(self, include_trace: bool = False) -> dict:
        out = {
            "id": self.id,
            "name": self.name,
            "parentId": self.parent_id,
            "queryText": self.query_text,
            "effectiveQuery": self.effective_query,
            "memberCount": len(self.member_uids),
            "createdAt": self.created_at,
            "hasTrace": self.trace is not None,
        }
        if include_trace:
            out["trace"] = self.trace.to_json() if self.trace else None
        return out


@dataclass
class CohortTree:
    store: object
    nodes: dict[str, CohortNode] = field(default_factory=dict)
    log: list[dict] = field(default_factory=list)
    _counter: int = 0
    # traces of every node that ever existed, kept so saved logs can
    # reference traces of since-removed cohorts
    _trace_archive: dict[str, WranglerTrace] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, cohort_id: str) -> bool:
        return cohort_id in self.nodes

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohortTree):
            return NotImplemented
        return list(self.nodes.items()) == list(other.nodes.items())

    def node(self, cohort_id: str) -> CohortNode:
        try:
            return self.nodes[cohort_id]
        except KeyError:
            raise UnknownCohort(cohort_id) from None

    def roots(self) -> list[CohortNode]:
        return [n for n in self.nodes.values() if n.parent_id is None]

    def children(self, cohort_id: str) -> list[CohortNode]:
        self.node(cohort_id)
        return [n for n in self.nodes.values() if n.parent_id == cohort_id]

    # ------------------------------------------------------------ mutation

    def _allocate_id(self) -> str:
        self._counter += 1
        return f"c{self._counter}"

    def add_cohort(
        self,
        typed: TypedQuery,
        name: str | None = None,
        trace: WranglerTrace | None = None,
        parent_id: str | None = None,
        *,
        node_id: str | None = None,
        created_at: str | None = None,
    ) -> CohortNode:
        """Evaluate the predicate against the parent's members (or the
        whole store for roots) and insert the materialized node."""
        parent = None
        if parent_id is not None:
            if parent_id not in self.nodes:
                raise UnknownParent(parent_id)
            parent = self.nodes[parent_id]

        if node_id is None:
            node_id = self._allocate_id()
        else:
            if node_id in self.nodes:
                raise ValueError(f"cohort id {node_id!r} already exists")
            # keep auto ids unique after replaying explicit ones
            if node_id.startswith("c") and node_id[1:].isdigit():
                self._counter = max(self._counter, int(node_id[1:]))
        if name is None:
            name = "C" + node_id[1:] if node_id[1:].isdigit() else node_id

        base = parent.member_uids if parent is not None else None
        members = frozenset(evaluate(typed, self.store, base_uids=base))
        node = CohortNode(
            id=node_id,
            name=name,
            parent_id=parent_id,
            typed=typed,
            effective_ast=_conjoin(parent.effective_ast if parent else None, typed.ast),
            member_uids=members,
            trace=trace,
            created_at=created_at or _now(),
        )
        self.nodes[node_id] = node
        if trace is not None:
            self._trace_archive[node_id] = trace
        self.log.append({
            "op": "add",
            "id": node_id,
            "parentId": parent_id,
            "name": name,
            "queryText": node.query_text,
            "traceRef": f"traces/{node_id}.json" if trace is not None else None,
            "timestamp": node.created_at,
        })
        self._check_shape()
        if not members:
            warnings.warn(
                f"cohort {node_id} ({name}) matched no patients", EmptyCohortWarning,
                stacklevel=2,
            )
        return node

    def remove_cohort(self, cohort_id: str, *, timestamp: str | None = None) -> list[str]:
        """Remove the node and all descendants; returns removed ids in
        preorder (parents before children)."""
        self.node(cohort_id)
        removed = []
        stack = [cohort_id]
        while stack:
            cur = stack.pop(0)
            removed.append(cur)
            stack.extend(n.id for n in self.nodes.values() if n.parent_id == cur)
        for cid in removed:
            del self.nodes[cid]
        self.log.append({
            "op": "remove",
            "id": cohort_id,
            "parentId": None,
            "name": None,
            "queryText": None,
            "traceRef": None,
            "timestamp": timestamp or _now(),
        })
        self._check_shape()
        return removed

    def _check_shape(self) -> None:
        """Structural invariants, verified after every mutation."""
        for node in self.nodes.values():
            if node.parent_id is None:
                continue
            parent = self.nodes.get(node.parent_id)
            assert parent is not None, f"{node.id}: dangling parent {node.parent_id}"
            assert node.member_uids <= parent.member_uids, f"{node.id}: not a refinement"
            # walk to a root; a cycle would never terminate, so bound the walk
            seen = {node.id}
            cur = node
            while cur.parent_id is not None:
                assert cur.parent_id not in seen, f"cycle through {cur.parent_id}"
                seen.add(cur.parent_id)
                cur = self.nodes[cur.parent_id]

    # -------------------------------------------------------------- views

    def group_summary(self, cohort_id: str) -> dict:
        """Per-series stats and fixed-bin histograms over all member
        measurements, plus per-code counts for categorical fields."""
        node = self.node(cohort_id)
        store = self.store
        rows = sorted(store.row_of(u) for u in node.member_uids)
        offsets = store.bp_offsets

        per_bp = {}
        for series in store.codebook.bp_series_names():
            flat = store.bp_values_flat(series)
            parts = [flat[offsets[r]:offsets[r + 1]] for r in rows]
            values = np.concatenate(parts) if parts else np.empty(0)
            idx = np.clip(((values - HIST_LO) // HIST_STEP).astype(int), 0, N_HIST_BINS - 1)
            counts = np.bincount(idx, minlength=N_HIST_BINS) if values.size else np.zeros(
                N_HIST_BINS, dtype=int)
            per_bp[series] = {
                "stats": descriptive_stats(values).to_json(),
                "histogram": {
                    "binStart": HIST_LO,
                    "binWidth": HIST_STEP,
                    "counts": counts.tolist(),
                },
            }

        tables = []
        row_arr = np.array(rows, dtype=np.intp)
        for fd in store.codebook.clinical_fields():
            if not fd.is_categorical:
                continue
            col = store.column(fd.name)
            vals = col[row_arr] if row_arr.size else np.empty(0)
            tables.append({
                "field": fd.name,
                "rows": [
                    {"code": c, "label": fd.coding[c], "count": int(np.sum(vals == c))}
                    for c in sorted(fd.coding)
                ],
                "missing": int(np.isnan(vals).sum()),
            })

        return {
            "memberCount": len(node.member_uids),
            "perBpType": per_bp,
            "attributeTables": tables,
        }

    def sort_members(
        self,
        cohort_id: str,
        key: SortKey | str,
        direction: str = "asc",
        cycle_hours: float = 24.0,
    ) -> list[str]:
        node = self.node(cohort_id)
        if isinstance(key, str):
            key = parse_sort_key(key, self.store.codebook)
        return order_uids(self.store, node.member_uids, key, direction, cycle_hours)

    def to_json(self) -> dict:
        return {"nodes": [n.to_json() for n in self.nodes.values()]}
