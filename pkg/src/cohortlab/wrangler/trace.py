"""Structured record of one natural-language translation attempt."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class NormalizationEntry:
    """One phrase-to-schema mapping proposed by the model.

    candidate_field may be None when the model normalized a phrase
    without tying it to a schema field.
    """

    raw_term: str
    normalized_term: str
    candidate_field: str | None = None

    def to_json(self) -> dict:
        return {
            "rawTerm": self.raw_term,
            "normalizedTerm": self.normalized_term,
            "candidateField": self.candidate_field,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NormalizationEntry":
        return cls(obj["rawTerm"], obj["normalizedTerm"], obj.get("candidateField"))


@dataclass(frozen=True)
class RepairRecord:
    """One repair round: the error fed back and the revised query text.

    revised_dsl is None on the final record when the budget ran out
    before a fix arrived.
    """

    error: str
    revised_dsl: str | None

    def to_json(self) -> dict:
        return {"error": self.error, "revisedDsl": self.revised_dsl}

    @classmethod
    def from_json(cls, obj: dict) -> "RepairRecord":
        return cls(obj["error"], obj.get("revisedDsl"))


@dataclass
class WranglerTrace:
    """Everything the pipeline learned while translating one request.

    Kept on the cohort node (and serialized with sessions) so the
    inspection view can show how a cohort came to be.
    """

    request_text: str
    normalizations: list[NormalizationEntry] = field(default_factory=list)
    roi: list[tuple[str, str]] = field(default_factory=list)
    inference_text: str = ""
    dsl_text: str = ""
    repairs: list[RepairRecord] = field(default_factory=list)
    involved_fields: tuple[str, ...] = ()
    status: str = "failed"

    def to_json(self) -> dict:
        return {
            "requestText": self.request_text,
            "normalizations": [n.to_json() for n in self.normalizations],
            "roi": [{"table": t, "field": f} for t, f in self.roi],
            "inferenceText": self.inference_text,
            "dslText": self.dsl_text,
            "repairs": [r.to_json() for r in self.repairs],
            "involvedFields": list(self.involved_fields),
            "status": self.status,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WranglerTrace":
        return cls(
            request_text=obj["requestText"],
            normalizations=[NormalizationEntry.from_json(n) for n in obj["normalizations"]],
            roi=[(r["table"], r["field"]) for r in obj["roi"]],
            inference_text=obj["inferenceText"],
            dsl_text=obj["dslText"],
            repairs=[RepairRecord.from_json(r) for r in obj["repairs"]],
            involved_fields=tuple(obj["involvedFields"]),
            status=obj["status"],
        )
