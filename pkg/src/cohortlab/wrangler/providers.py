"""Completion providers.

Three implementations behind one tiny protocol: a scripted mock for
tests and offline demos, a disk-backed replay cache, and a live client
for an OpenAI-compatible chat endpoint. The pipeline only ever calls
``complete(prompt, temperature)``.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import Protocol

import httpx

from .errors import ProviderError
from .prompts import count_repairs, extract_request


class LlmProvider(Protocol):
    def complete(self, prompt: str, temperature: float = 0.0) -> str: ...


def normalize_request(text: str) -> str:
    """Fixture key: casefolded, whitespace-collapsed, trailing punctuation dropped."""
    return " ".join(text.split()).casefold().rstrip(".!?,;:")


# Returned when a scripted provider has no fixture for the request. The
# DSL line fails to parse, so the pipeline burns its repair budget and
# surfaces an unparseable error instead of silently matching nothing.
UNKNOWN_RESPONSE = """\
NORMALIZATION: none
ROI: none
INFERENCE: The request did not match anything this scripted provider knows.
DSL: UNKNOWN_REQUEST ???"""


class MockProvider:
    """Deterministic provider scripted by request text.

    fixtures maps a normalized request to either one completion or a
    list of completions indexed by how many repair rounds the prompt
    already contains (the last entry repeats when rounds exceed it).
    """

    def __init__(self, fixtures: dict[str, str | list[str]] | None = None):
        self.fixtures = {normalize_request(k): v for k, v in (fixtures or {}).items()}
        self.calls: list[str] = []

    def complete(self, prompt: str, temperature: float = 0.0) -> str:
        self.calls.append(prompt)
        request = extract_request(prompt)
        if request is None:
            raise ProviderError("prompt carries no request markers")
        entry = self.fixtures.get(normalize_request(request))
        if entry is None:
            return UNKNOWN_RESPONSE
        if isinstance(entry, str):
            return entry
        idx = min(count_repairs(prompt), len(entry) - 1)
        return entry[idx]


class ReplayProvider:
    """Replays completions stored on disk, keyed by prompt hash.

    With an upstream provider it records misses; without one a miss is a
    ProviderError, which keeps replayed runs byte-deterministic.
    """

    def __init__(self, cache_dir, upstream: LlmProvider | None = None):
        self.cache_dir = Path(cache_dir)
        self.upstream = upstream

    def _path(self, prompt: str) -> Path:
        digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()
        return self.cache_dir / f"{digest}.txt"

    def complete(self, prompt: str, temperature: float = 0.0) -> str:
        path = self._path(prompt)
        if path.exists():
            return path.read_text(encoding="utf-8")
        if self.upstream is None:
            raise ProviderError(f"no recorded completion for prompt hash {path.stem[:12]}")
        completion = self.upstream.complete(prompt, temperature)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path.write_text(completion, encoding="utf-8")
        return completion


class LiveProvider:
    """Minimal client for an OpenAI-compatible /chat/completions endpoint.

    The key is read from the named environment variable at call time, so
    configs never hold secrets.
    """

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key_env_var: str = "LLM_API_KEY",
        timeout: float = 60.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key_env_var = api_key_env_var
        self.timeout = timeout

    def complete(self, prompt: str, temperature: float = 0.0) -> str:
        headers = {}
        key = os.environ.get(self.api_key_env_var)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": self.model,
            "temperature": temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        try:
            resp = httpx.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise ProviderError(f"completion request failed: {exc}") from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderError(f"malformed completion response: {exc}") from exc
