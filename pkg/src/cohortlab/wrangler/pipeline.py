"""Natural-language request to typed query, via one LLM completion.

The provider sees only metadata (grammar, codebook schema, fantasy
examples) plus the request text; no patient-level value ever enters a
prompt. Completions that fail to parse or typecheck are re-prompted
with the structured error appended, up to a fixed repair budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dataset.codebook import Codebook
from ..query import MissingField, ParseError, TypecheckError, TypedQuery, compile_query
from .errors import MISSING_FIELD, PROVIDER_FAILURE, UNPARSEABLE, ProviderError, WranglerError
from .prompts import (
    REQUIRES_FIELD_RE,
    build_prompt,
    parse_normalizations,
    parse_roi,
    parse_sections,
)
from .providers import LlmProvider
from .trace import RepairRecord, WranglerTrace


@dataclass
class WranglerRequest:
    text: str
    codebook: Codebook
    parent_cohort_id: str | None = None
    max_repair_rounds: int = 2

    def __post_init__(self):
        self.text = self.text.strip()
        if not self.text:
            raise ValueError("request text is empty")
        if self.max_repair_rounds < 0:
            raise ValueError("max_repair_rounds must be >= 0")


class PromptLog:
    """Append-only record of every prompt sent to a provider."""

    def __init__(self):
        self.prompts: list[str] = []

    def record(self, prompt: str) -> None:
        self.prompts.append(prompt)

    def clear(self) -> None:
        self.prompts.clear()

    def __len__(self) -> int:
        return len(self.prompts)

    def __iter__(self):
        return iter(self.prompts)


# Process-wide log feeding the privacy audit: anything any pipeline run
# sends to any provider lands here.
PROMPT_LOG = PromptLog()


def _assemble_repairs(faults: list[str], attempts: list[str]) -> list[RepairRecord]:
    # fault i was answered by attempt i+1; a trailing fault has no revision
    return [
        RepairRecord(faults[i], attempts[i + 1] if i + 1 < len(attempts) else None)
        for i in range(len(faults))
    ]


def run_pipeline(
    request: WranglerRequest,
    provider: LlmProvider,
    store=None,
    prompt_log: PromptLog | None = None,
) -> tuple[TypedQuery, WranglerTrace]:
    """Translate a request; returns the compiled query and its trace.

    store is accepted for interface symmetry with callers that hold one;
    translation itself only ever reads the codebook.
    """
    codebook = request.codebook
    trace = WranglerTrace(request_text=request.text)
    attempts: list[str] = []
    faults: list[str] = []
    last_exc: Exception | None = None

    for round_no in range(request.max_repair_rounds + 1):
        repair_pairs = [
            (faults[i], attempts[i] or "(missing DSL section)") for i in range(round_no)
        ]
        prompt = build_prompt(request.text, codebook, request.parent_cohort_id, repair_pairs)
        PROMPT_LOG.record(prompt)
        if prompt_log is not None:
            prompt_log.record(prompt)

        try:
            completion = provider.complete(prompt, temperature=0.0)
        except ProviderError as exc:
            trace.repairs = _assemble_repairs(faults, attempts)
            raise WranglerError(PROVIDER_FAILURE, f"provider failed: {exc}", trace) from exc

        sections = parse_sections(completion)
        if "NORMALIZATION" in sections:
            trace.normalizations = parse_normalizations(sections["NORMALIZATION"])
        if "ROI" in sections:
            trace.roi = parse_roi(sections["ROI"], codebook)
        if "INFERENCE" in sections:
            trace.inference_text = sections["INFERENCE"]

        dsl_text = sections.get("DSL", "").strip()
        attempts.append(dsl_text)
        if not dsl_text:
            faults.append("completion did not contain a DSL section")
            last_exc = None
            continue
        trace.dsl_text = dsl_text

        declared = REQUIRES_FIELD_RE.match(dsl_text)
        if declared:
            # the model explicitly declared the request inexpressible;
            # repairs cannot help, surface it at once
            concept = declared.group(1)
            trace.repairs = _assemble_repairs(faults, attempts)
            raise WranglerError(
                MISSING_FIELD,
                f"request needs a data field the schema does not have: {concept}",
                trace,
                concept=concept,
            )

        try:
            typed = compile_query(dsl_text, codebook)
        except (ParseError, TypecheckError) as exc:
            faults.append(f"{type(exc).__name__}: {exc}")
            last_exc = exc
            continue

        trace.dsl_text = typed.source_text
        trace.involved_fields = typed.involved_fields
        trace.repairs = _assemble_repairs(faults, attempts)
        trace.status = "success"
        return typed, trace

    trace.repairs = _assemble_repairs(faults, attempts)
    if isinstance(last_exc, MissingField):
        raise WranglerError(
            MISSING_FIELD,
            f"no schema field matches {last_exc.name!r} after "
            f"{request.max_repair_rounds} repair rounds",
            trace,
            concept=last_exc.name,
        ) from last_exc
    raise WranglerError(
        UNPARSEABLE,
        f"could not obtain a valid query after {request.max_repair_rounds} repair rounds: "
        f"{faults[-1]}",
        trace,
    ) from last_exc
