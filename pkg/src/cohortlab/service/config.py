"""Service configuration: dataset location, listen address, LLM
provider wiring, session directory, and visual defaults.

Configs never hold secrets; live mode names an environment variable
and the key is read at call time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..vis.config import FoldConfig, LegendEntry
from ..wrangler.fixtures import default_mock_provider
from ..wrangler.providers import LiveProvider, ReplayProvider

LLM_MODES = ("mock", "replay", "live")


@dataclass
class LlmConfig:
    mode: str = "mock"
    base_url: str | None = None
    model: str | None = None
    api_key_env_var: str = "LLM_API_KEY"
    fixture_dir: str | None = None

    def __post_init__(self):
        if self.mode not in LLM_MODES:
            raise ValueError(f"llm mode must be one of {LLM_MODES}, got {self.mode!r}")
        if self.mode == "live" and not (self.base_url and self.model):
            raise ValueError("live llm mode requires baseUrl and model")
        if self.mode == "replay" and not self.fixture_dir:
            raise ValueError("replay llm mode requires fixtureDir")

    @classmethod
    def from_json(cls, obj: dict) -> "LlmConfig":
        return cls(
            mode=obj.get("mode", "mock"),
            base_url=obj.get("baseUrl"),
            model=obj.get("model"),
            api_key_env_var=obj.get("apiKeyEnvVar", "LLM_API_KEY"),
            fixture_dir=obj.get("fixtureDir"),
        )


def build_provider(llm: LlmConfig):
    if llm.mode == "mock":
        return default_mock_provider()
    if llm.mode == "replay":
        return ReplayProvider(llm.fixture_dir)
    return LiveProvider(llm.base_url, llm.model, llm.api_key_env_var)


def _fold_config_from_json(obj: dict) -> FoldConfig:
    legend = None
    if obj.get("legend"):
        legend = tuple(
            LegendEntry(
                upper_bound=float("inf") if e["upperBound"] is None else float(e["upperBound"]),
                name=e["name"],
                color_token=e.get("colorToken", f"band-{i + 1}"),
            )
            for i, e in enumerate(obj["legend"])
        )
    return FoldConfig(
        cycle_hours=float(obj.get("cycleHours", 24.0)),
        bp_type=obj.get("bpType", "sbp"),
        legend=legend,
    )


@dataclass
class ServiceConfig:
    data_dir: Path
    listen_address: str = "127.0.0.1:8700"
    llm: LlmConfig = field(default_factory=LlmConfig)
    session_dir: Path | None = None
    defaults: FoldConfig = field(default_factory=FoldConfig)

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])

    @classmethod
    def from_json(cls, obj: dict, base_dir: Path | None = None) -> "ServiceConfig":
        base = base_dir or Path(".")

        def resolve(p):
            return p if p is None else (base / p).resolve()

        return cls(
            data_dir=resolve(obj["dataDir"]),
            listen_address=obj.get("listenAddress", "127.0.0.1:8700"),
            llm=LlmConfig.from_json(obj.get("llm", {})),
            session_dir=resolve(obj.get("sessionDir")),
            defaults=_fold_config_from_json(obj.get("defaults", {})),
        )

    @classmethod
    def load(cls, path) -> "ServiceConfig":
        path = Path(path)
        obj = json.loads(path.read_text(encoding="utf-8"))
        return cls.from_json(obj, base_dir=path.parent)
