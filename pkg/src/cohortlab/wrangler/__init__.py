"""Natural-language to query translation with privacy-safe prompting."""

from .audit import codebook_allowlist, privacy_audit
from .errors import (
    KINDS,
    MISSING_FIELD,
    PROVIDER_FAILURE,
    UNPARSEABLE,
    ProviderError,
    WranglerError,
)
from .fixtures import (
    DEFAULT_FIXTURES,
    REQUEST_ANTIPLATELET_TIMING,
    REQUEST_ELDERLY_MALE_LAA,
    REQUEST_SBP_ABOVE_160,
    REQUEST_SBP_AT_LEAST_180,
    default_mock_provider,
)
from .multiples import SmallMultipleSpec, small_multiples
from .pipeline import PROMPT_LOG, PromptLog, WranglerRequest, run_pipeline
from .prompts import build_prompt, extract_request, parse_sections, schema_lines
from .providers import (
    LiveProvider,
    LlmProvider,
    MockProvider,
    ReplayProvider,
    UNKNOWN_RESPONSE,
    normalize_request,
)
from .trace import NormalizationEntry, RepairRecord, WranglerTrace

__all__ = [
    "DEFAULT_FIXTURES",
    "KINDS",
    "MISSING_FIELD",
    "PROMPT_LOG",
    "PROVIDER_FAILURE",
    "REQUEST_ANTIPLATELET_TIMING",
    "REQUEST_ELDERLY_MALE_LAA",
    "REQUEST_SBP_ABOVE_160",
    "REQUEST_SBP_AT_LEAST_180",
    "UNKNOWN_RESPONSE",
    "UNPARSEABLE",
    "LiveProvider",
    "LlmProvider",
    "MockProvider",
    "NormalizationEntry",
    "PromptLog",
    "ProviderError",
    "RepairRecord",
    "ReplayProvider",
    "SmallMultipleSpec",
    "WranglerError",
    "WranglerRequest",
    "WranglerTrace",
    "build_prompt",
    "codebook_allowlist",
    "default_mock_provider",
    "extract_request",
    "normalize_request",
    "parse_sections",
    "privacy_audit",
    "run_pipeline",
    "schema_lines",
    "small_multiples",
]
