"""Prompt assembly and completion parsing for the translation pipeline.

One completion carries four labeled sections (NORMALIZATION, ROI,
INFERENCE, DSL). The prompt shows the query grammar, the dataset
schema, four worked examples over a fantasy schema, and the request
between unambiguous markers so a scripted provider can key on it.
"""

from __future__ import annotations

import re

from ..dataset.codebook import Codebook
from .trace import NormalizationEntry

REQUEST_OPEN = "=== REQUEST ==="
REQUEST_CLOSE = "=== END REQUEST ==="
REPAIR_MARKER = "=== REPAIR"

SECTION_NAMES = ("NORMALIZATION", "ROI", "INFERENCE", "DSL")

GRAMMAR_TEXT = """\
query      = orExpr ;
orExpr     = andExpr { "or" andExpr } ;
andExpr    = unaryExpr { "and" unaryExpr } ;
unaryExpr  = "not" unaryExpr | primary ;
primary    = "(" query ")" | existsExpr | eventExpr | fieldPred | boolLit ;
fieldPred  = ident ( compareOp literal | "in" "[" literal { "," literal } "]" ) ;
existsExpr = "exists" "(" "bp" "." series "," window "," "value" compareOp number ")" ;
eventExpr  = "has_event" "(" ident [ "," window ] ")" ;
window     = "hours" "(" number "," number ")" ;
series     = "sbp" | "dbp" | "map" ;
compareOp  = "==" | "!=" | "<" | "<=" | ">" | ">=" ;
boolLit    = "true" | "false" ;
literal    = number | string ;"""

_EXAMPLES_TEXT = """\
Example 1
REQUEST: Female study subjects aged 80 or older.
NORMALIZATION: "female" -> subject_sex == 0 (subject_sex); "aged 80 or older" -> subject_age >= 80 (subject_age)
ROI: clinical.subject_sex, clinical.subject_age
INFERENCE: Two demographic conditions joined by and. subject_sex code 0 means female and the age cutoff is inclusive as requested.
DSL: subject_sex == 0 and subject_age >= 80

Example 2
REQUEST: Subjects whose recorded job is farmer.
NORMALIZATION: "job is farmer" -> occupation == 3 (occupation)
ROI: clinical.occupation
INFERENCE: The occupation coding maps farmer to code 3, so a single categorical equality suffices.
DSL: occupation == 3

Example 3
REQUEST: Subjects whose diastolic pressure dropped below 50 during the first day.
NORMALIZATION: "diastolic pressure" -> bp.dbp (dbp); "first day" -> hours(0,24)
ROI: bp.dbp
INFERENCE: One diastolic measurement below 50 inside the half-open window from hour 0 to hour 24 qualifies a subject.
DSL: exists(bp.dbp, hours(0,24), value < 50)

Example 4
REQUEST: Subjects with a transfusion during the first week.
NORMALIZATION: "transfusion" -> has_event(transfusion) (kind); "first week" -> hours(0,168)
ROI: events.kind
INFERENCE: Event predicates match when the event interval intersects the window, here the first 168 hours.
DSL: has_event(transfusion, hours(0,168))"""

_INSTRUCTIONS_TEXT = """\
Answer with exactly four sections, each on its own lines, labeled
NORMALIZATION:, ROI:, INFERENCE:, DSL: in that order.

NORMALIZATION lists each request phrase you mapped onto the schema as
"raw phrase" -> normalized form (field), entries separated by
semicolons, or "none" when nothing needed mapping.
ROI lists the tables and fields the query reads as table.field pairs
separated by commas.
INFERENCE is one short paragraph explaining the conditions you chose.
DSL is a single query in the grammar above, using only fields from the
schema. Numeric codes, not labels, for categorical fields. Do not
invent fields.

If the request needs a concept the schema cannot express, set the DSL
section to REQUIRES_FIELD("<concept>") with a short lowercase phrase
naming the missing concept."""

_REFINEMENT_NOTE = (
    "The request refines an existing cohort; translate only the stated "
    "condition. It will be intersected with the parent membership by the "
    "caller, so do not restate the parent's criteria."
)


def schema_lines(codebook: Codebook) -> list[str]:
    """One line per field: name, table, dtype, unit or coding, description."""
    lines = []
    for fd in codebook.fields:
        parts = [fd.table, fd.dtype]
        if fd.unit:
            parts.append(f"unit={fd.unit}")
        if fd.coding:
            codes = ",".join(f"{c}={lbl}" for c, lbl in sorted(fd.coding.items()))
            parts.append(f"codes{{{codes}}}")
        desc = f": {fd.description}" if fd.description else ""
        lines.append(f"- {fd.name}: " + " ".join(parts) + desc)
    return lines


def build_prompt(
    text: str,
    codebook: Codebook,
    parent_cohort_id: str | None = None,
    repairs: list[tuple[str, str]] | None = None,
) -> str:
    """Assemble the full prompt; repairs is [(error text, bad dsl)] in order."""
    blocks = [
        "You translate clinical cohort requests into a filter query language.",
        "=== GRAMMAR ===",
        GRAMMAR_TEXT,
        "=== SCHEMA ===",
        "\n".join(schema_lines(codebook)),
        "=== EXAMPLES ===",
        _EXAMPLES_TEXT,
        "=== INSTRUCTIONS ===",
        _INSTRUCTIONS_TEXT,
    ]
    if parent_cohort_id is not None:
        blocks.append(_REFINEMENT_NOTE)
    blocks += [REQUEST_OPEN, text, REQUEST_CLOSE]
    for i, (error_text, bad_dsl) in enumerate(repairs or [], start=1):
        blocks += [
            f"{REPAIR_MARKER} {i} ===",
            f"Your previous DSL section was:\n{bad_dsl}",
            f"It was rejected: {error_text}",
            "Answer again with all four sections, fixing the DSL.",
        ]
    return "\n\n".join(blocks)


def extract_request(prompt: str) -> str | None:
    """Pull the request text back out of a prompt (scripted providers key on it)."""
    start = prompt.find(REQUEST_OPEN)
    end = prompt.find(REQUEST_CLOSE)
    if start < 0 or end < 0 or end < start:
        return None
    return prompt[start + len(REQUEST_OPEN):end].strip()


def count_repairs(prompt: str) -> int:
    return prompt.count(REPAIR_MARKER)


_SECTION_RE = re.compile(
    r"^(NORMALIZATION|ROI|INFERENCE|DSL)\s*:\s*", re.MULTILINE
)


def parse_sections(completion: str) -> dict[str, str]:
    """Split a completion into its labeled sections.

    Returns only the sections present; dangling labels get empty strings.
    Content runs until the next label or end of text.
    """
    matches = list(_SECTION_RE.finditer(completion))
    sections: dict[str, str] = {}
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(completion)
        # later duplicate labels win; models sometimes restate a section
        sections[m.group(1)] = completion[m.end():end].strip()
    return sections


REQUIRES_FIELD_RE = re.compile(r'^REQUIRES_FIELD\(\s*"([^"]+)"\s*\)$')

_NORM_ENTRY_RE = re.compile(r'^"(?P<raw>[^"]*)"\s*->\s*(?P<norm>.*?)(?:\s*\((?P<field>\w+)\))?$')


def parse_normalizations(text: str) -> list[NormalizationEntry]:
    """Best-effort parse of semicolon-separated "raw" -> normalized (field) entries.

    Lines that do not match the shape are kept as raw == normalized so
    nothing the model said is dropped from the trace.
    """
    text = text.strip()
    if not text or text.lower() == "none":
        return []
    entries = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        m = _NORM_ENTRY_RE.match(part)
        if m:
            entries.append(
                NormalizationEntry(m.group("raw"), m.group("norm").strip(), m.group("field"))
            )
        else:
            entries.append(NormalizationEntry(part, part, None))
    return entries


def parse_roi(text: str, codebook: Codebook) -> list[tuple[str, str]]:
    """Parse table.field pairs, keeping only those the codebook confirms."""
    pairs = []
    for part in re.split(r"[,\s]+", text.strip()):
        if "." not in part:
            continue
        table, _, name = part.partition(".")
        fd = codebook.get(name)
        if fd is not None and fd.table == table and (table, name) not in pairs:
            pairs.append((table, name))
    return pairs
