from veripg.generator.descriptions import builtin_description, covered_cwe_ids
from veripg.generator.pipeline import (
    CweDescription,
    FormatError,
    GenerationSession,
    VulnerabilityConditions,
    extract_conditions,
    generate_rule,
    misuse_metrics,
    session_to_dict,
)
from veripg.generator.provider import (
    LiveProvider,
    Provider,
    ProviderConfig,
    ProviderError,
    RecordingProvider,
    ReplayMismatch,
    ReplayProvider,
    ScriptedProvider,
    request_digest,
)

__all__ = [
    "CweDescription",
    "FormatError",
    "GenerationSession",
    "LiveProvider",
    "Provider",
    "ProviderConfig",
    "ProviderError",
    "RecordingProvider",
    "ReplayMismatch",
    "ReplayProvider",
    "ScriptedProvider",
    "VulnerabilityConditions",
    "builtin_description",
    "covered_cwe_ids",
    "extract_conditions",
    "generate_rule",
    "misuse_metrics",
    "request_digest",
    "session_to_dict",
]
