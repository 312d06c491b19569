"""Field metadata and codebook handling.

The codebook is the only part of a dataset that is ever shared outside
the process boundary (it is what gets embedded into LLM prompts), so it
carries everything needed to describe a column without exposing a single
patient-level value: names, owning tables, dtypes, units, code->label
maps, and free-text descriptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

TABLES = ("clinical", "bp", "events")
DTYPES = ("numeric", "categorical")


@dataclass(frozen=True)
class FieldDescriptor:
    """Metadata for one dataset column."""

    name: str
    table: str
    dtype: str
    unit: str | None = None
    coding: dict[int, str] | None = None
    description: str = ""

    def __post_init__(self):
        if self.table not in TABLES:
            raise ValueError(f"field {self.name!r}: unknown table {self.table!r}")
        if self.dtype not in DTYPES:
            raise ValueError(f"field {self.name!r}: unknown dtype {self.dtype!r}")
        if self.dtype == "categorical" and not self.coding:
            raise ValueError(f"categorical field {self.name!r} needs a non-empty coding map")
        if self.dtype == "numeric" and self.coding:
            raise ValueError(f"numeric field {self.name!r} must not carry a coding map")

    @property
    def is_categorical(self) -> bool:
        return self.dtype == "categorical"

    def label_for(self, code: int) -> str | None:
        return (self.coding or {}).get(int(code))

    def code_for_label(self, label: str) -> int | None:
        """Resolve a human label back to its integer code (case-insensitive)."""
        if not self.coding:
            return None
        folded = label.casefold()
        for code, name in self.coding.items():
            if name.casefold() == folded:
                return code
        return None

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "table": self.table, "dtype": self.dtype}
        if self.unit is not None:
            out["unit"] = self.unit
        if self.coding is not None:
            out["coding"] = {str(k): v for k, v in self.coding.items()}
        if self.description:
            out["description"] = self.description
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FieldDescriptor":
        coding = obj.get("coding")
        if coding is not None:
            coding = {int(k): str(v) for k, v in coding.items()}
        return cls(
            name=obj["name"],
            table=obj["table"],
            dtype=obj["dtype"],
            unit=obj.get("unit"),
            coding=coding,
            description=obj.get("description", ""),
        )


class Codebook:
    """Ordered collection of field descriptors for one dataset."""

    def __init__(self, fields, dataset_name: str = "dataset", version: str = "1"):
        self.fields: tuple[FieldDescriptor, ...] = tuple(fields)
        self.dataset_name = dataset_name
        self.version = version
        self._by_name: dict[str, FieldDescriptor] = {}
        for fd in self.fields:
            if fd.name in self._by_name:
                raise ValueError(f"duplicate field name {fd.name!r} in codebook")
            self._by_name[fd.name] = fd

    def __eq__(self, other) -> bool:
        if not isinstance(other, Codebook):
            return NotImplemented
        return (
            self.fields == other.fields
            and self.dataset_name == other.dataset_name
            and self.version == other.version
        )

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def field(self, name: str) -> FieldDescriptor:
        return self._by_name[name]

    def get(self, name: str) -> FieldDescriptor | None:
        return self._by_name.get(name)

    def names(self, table: str | None = None) -> list[str]:
        return [f.name for f in self.fields if table is None or f.table == table]

    def clinical_fields(self) -> list[FieldDescriptor]:
        return [f for f in self.fields if f.table == "clinical"]

    def bp_series_names(self) -> list[str]:
        """Series that can be queried with a temporal-exists predicate."""
        return ["sbp", "dbp", "map"]

    def event_kinds(self) -> list[str]:
        """Canonical event kind labels, from the events-table ``kind`` field."""
        fd = self.get("kind")
        if fd is None or fd.table != "events" or not fd.coding:
            return []
        return [fd.coding[c] for c in sorted(fd.coding)]

    def canonical_event_kind(self, text: str) -> str | None:
        """Match an event kind case-insensitively against the known labels."""
        folded = text.casefold()
        for kind in self.event_kinds():
            if kind.casefold() == folded:
                return kind
        return None

    def to_json(self) -> dict:
        return {
            "datasetName": self.dataset_name,
            "version": self.version,
            "fields": [f.to_json() for f in self.fields],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Codebook":
        return cls(
            [FieldDescriptor.from_json(f) for f in obj["fields"]],
            dataset_name=obj.get("datasetName", "dataset"),
            version=obj.get("version", "1"),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Codebook":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))
