"""Session persistence: append-only operation log plus trace files.

Layout under the session directory:

    log.jsonl          one {op, id, parentId, name, queryText, traceRef,
                       timestamp} record per mutation, in order
    traces/<id>.json   full WranglerTrace for nodes that carry one

Loading replays the log against a store and re-materializes every
membership, so a stored session always reproduces the exact member
sets it was saved with (or fails loudly with ReplayError when the
store no longer supports a stored query).
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path

from ..query import ParseError, TypecheckError
from ..query.typecheck import compile_query
from ..wrangler.trace import WranglerTrace
from .errors import CohortError, EmptyCohortWarning, ReplayError
from .tree import CohortTree

LOG_FILE = "log.jsonl"
TRACES_DIR = "traces"


def save_session(tree: CohortTree, session_dir) -> Path:
    """Write the tree's full operation log; returns the log path."""
    root = Path(session_dir)
    root.mkdir(parents=True, exist_ok=True)
    referenced = {
        rec["id"] for rec in tree.log if rec["op"] == "add" and rec["traceRef"] is not None
    }
    if referenced:
        (root / TRACES_DIR).mkdir(exist_ok=True)
    for node_id in referenced:
        trace = tree._trace_archive.get(node_id)
        if trace is not None:
            path = root / TRACES_DIR / f"{node_id}.json"
            path.write_text(json.dumps(trace.to_json(), indent=2) + "\n", encoding="utf-8")
    log_path = root / LOG_FILE
    with open(log_path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in tree.log:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return log_path


def load_session(session_dir, store) -> CohortTree:
    """Replay a saved log into a fresh tree over the given store."""
    root = Path(session_dir)
    log_path = root / LOG_FILE
    tree = CohortTree(store)
    with open(log_path, encoding="utf-8") as fh:
        # empty-cohort warnings already fired when the session was live;
        # replay should not repeat them
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyCohortWarning)
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                _apply(tree, record, root, store)
    return tree


def _apply(tree: CohortTree, record: dict, root: Path, store) -> None:
    op = record.get("op")
    if op == "add":
        try:
            typed = compile_query(record["queryText"], store.codebook)
        except (ParseError, TypecheckError) as exc:
            raise ReplayError(record, str(exc)) from exc
        trace = None
        if record.get("traceRef"):
            trace_path = root / record["traceRef"]
            if trace_path.exists():
                trace = WranglerTrace.from_json(
                    json.loads(trace_path.read_text(encoding="utf-8")))
        try:
            tree.add_cohort(
                typed,
                name=record["name"],
                trace=trace,
                parent_id=record.get("parentId"),
                node_id=record["id"],
                created_at=record.get("timestamp"),
            )
        except (CohortError, ValueError) as exc:
            raise ReplayError(record, str(exc)) from exc
    elif op == "remove":
        try:
            tree.remove_cohort(record["id"], timestamp=record.get("timestamp"))
        except CohortError as exc:
            raise ReplayError(record, str(exc)) from exc
    else:
        raise ReplayError(record, f"unknown op {op!r}")
