"""CSV ingest.

A dataset on disk is a directory of four files:

    codebook.json   field descriptors (see codebook.py)
    clinical.csv    one row per patient: uid column + one column per field
    bp.csv          uid,t_hours,sbp,dbp
    events.csv      uid,kind,t_start_hours,t_end_hours (t_end may be blank)

Empty cells mean missing. All structural violations found during a load
are collected and reported together via the raised error's ``issues``.
"""

from __future__ import annotations

import csv
from pathlib import Path

from cohortlab.dataset.codebook import Codebook
from cohortlab.dataset.errors import DatasetError, FormatError, raise_collected
from cohortlab.dataset.store import PatientStore, build_store

CLINICAL_FILE = "clinical.csv"
BP_FILE = "bp.csv"
EVENTS_FILE = "events.csv"
CODEBOOK_FILE = "codebook.json"


def _read_rows(path: Path, issues: list) -> tuple[list[str], list[tuple[int, list[str]]]]:
    """Header plus (line_number, cells) rows; short/long rows are reported."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            issues.append(FormatError(1, "empty file", source=path.name))
            return [], []
        rows = []
        for line_no, cells in enumerate(reader, start=2):
            if not cells or all(c.strip() == "" for c in cells):
                continue
            if len(cells) != len(header):
                issues.append(FormatError(
                    line_no, f"expected {len(header)} cells, got {len(cells)}",
                    source=path.name))
                continue
            rows.append((line_no, cells))
    return [h.strip() for h in header], rows


def _parse_float(cell: str, line_no: int, column: str, source: str, issues: list) -> float | None:
    cell = cell.strip()
    if cell == "":
        return None
    try:
        return float(cell)
    except ValueError:
        issues.append(FormatError(
            line_no, f"column {column!r}: not a number: {cell!r}", source=source))
        return None


def load_dataset(path: str | Path) -> PatientStore:
    """Load a dataset directory into an immutable :class:`PatientStore`.

    Raises the first collected :class:`DatasetError` (with the full list on
    its ``issues`` attribute) if any file is malformed or the tables are
    inconsistent with each other or the codebook.
    """
    root = Path(path)
    issues: list[DatasetError] = []

    codebook = Codebook.load(root / CODEBOOK_FILE)

    clinical_rows: list[dict] = []
    header, rows = _read_rows(root / CLINICAL_FILE, issues)
    if header and header[0] != "uid":
        issues.append(FormatError(1, "first clinical column must be 'uid'", source=CLINICAL_FILE))
    for line_no, cells in rows:
        row: dict = {"uid": cells[0].strip()}
        for col, cell in zip(header[1:], cells[1:]):
            row[col] = _parse_float(cell, line_no, col, CLINICAL_FILE, issues)
        clinical_rows.append(row)

    bp_rows: list[tuple] = []
    header, rows = _read_rows(root / BP_FILE, issues)
    if header and header != ["uid", "t_hours", "sbp", "dbp"]:
        issues.append(FormatError(
            1, "bp header must be uid,t_hours,sbp,dbp", source=BP_FILE))
    else:
        for line_no, cells in rows:
            t = _parse_float(cells[1], line_no, "t_hours", BP_FILE, issues)
            sbp = _parse_float(cells[2], line_no, "sbp", BP_FILE, issues)
            dbp = _parse_float(cells[3], line_no, "dbp", BP_FILE, issues)
            if t is None or sbp is None or dbp is None:
                issues.append(FormatError(
                    line_no, "bp row has empty required cell", source=BP_FILE))
                continue
            bp_rows.append((cells[0].strip(), t, sbp, dbp))

    event_rows: list[tuple] = []
    header, rows = _read_rows(root / EVENTS_FILE, issues)
    if header and header != ["uid", "kind", "t_start_hours", "t_end_hours"]:
        issues.append(FormatError(
            1, "events header must be uid,kind,t_start_hours,t_end_hours", source=EVENTS_FILE))
    else:
        for line_no, cells in rows:
            t0 = _parse_float(cells[2], line_no, "t_start_hours", EVENTS_FILE, issues)
            t1 = _parse_float(cells[3], line_no, "t_end_hours", EVENTS_FILE, issues)
            if t0 is None or not cells[1].strip():
                issues.append(FormatError(
                    line_no, "event row needs kind and t_start_hours", source=EVENTS_FILE))
                continue
            event_rows.append((cells[0].strip(), cells[1].strip(), t0, t1))

    return build_store(codebook, clinical_rows, bp_rows, event_rows, issues=issues)


def write_dataset(root: str | Path, codebook: Codebook,
                  clinical_rows, bp_rows, event_rows) -> None:
    """Write the four dataset files. Formatting is fixed so identical input
    produces byte-identical files."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    codebook.save(root / CODEBOOK_FILE)

    names = [fd.name for fd in codebook.clinical_fields()]
    with open(root / CLINICAL_FILE, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["uid"] + names)
        for row in clinical_rows:
            w.writerow([row["uid"]] + [_fmt_clinical(row.get(n)) for n in names])

    with open(root / BP_FILE, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["uid", "t_hours", "sbp", "dbp"])
        for uid, t, sbp, dbp in bp_rows:
            w.writerow([uid, f"{t:.4f}", f"{sbp:.1f}", f"{dbp:.1f}"])

    with open(root / EVENTS_FILE, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["uid", "kind", "t_start_hours", "t_end_hours"])
        for uid, kind, t0, t1 in event_rows:
            w.writerow([uid, kind, f"{t0:.4f}", "" if t1 is None else f"{t1:.4f}"])


def _fmt_clinical(v) -> str:
    if v is None:
        return ""
    s = f"{float(v):.2f}".rstrip("0").rstrip(".")
    return s if s else "0"
