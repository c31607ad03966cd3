"""Typed parsing and verification of structured LLM summaries."""

from .grounding import (
    FUZZY_THRESHOLD,
    GroundingReport,
    SpanVerdict,
    Verdict,
    verify_grounding,
)
from .parsers import (
    Issue,
    IssueSummary,
    LlmExtract,
    UnparseableOutput,
    Violation,
    extract_from_payload,
    issues_from_payload,
    parse_issue_summary,
    parse_llm_extract,
    print_issue_summary,
)
from .validate import DEFAULT_PLACEHOLDER_PATTERN, StructureConfig, validate_structure

__all__ = [
    "FUZZY_THRESHOLD",
    "GroundingReport",
    "SpanVerdict",
    "Verdict",
    "verify_grounding",
    "Issue",
    "IssueSummary",
    "LlmExtract",
    "UnparseableOutput",
    "Violation",
    "extract_from_payload",
    "issues_from_payload",
    "parse_issue_summary",
    "parse_llm_extract",
    "print_issue_summary",
    "DEFAULT_PLACEHOLDER_PATTERN",
    "StructureConfig",
    "validate_structure",
]
