"""Provider-agnostic LLM gateway: templates, client, pipeline."""

from .client import (
    AuthError,
    BudgetExceeded,
    CompletionRequest,
    CompletionResult,
    LiveTransport,
    LlmClient,
    RateLimited,
    ReplayMiss,
    ReplayTransport,
    ScriptedTransport,
    TransportError,
    UnsplittableParagraph,
    estimate_tokens,
    fit_to_budget,
    request_hash,
)
from .pipeline import KIND_BY_METHOD, LLM_METHODS, summarize_section
from .templates import (
    LANGUAGES,
    TEMPLATE_NAMES,
    MissingPlaceholder,
    PromptTemplate,
    escape_braces,
    load_template,
    render_prompt,
)

__all__ = [
    "AuthError",
    "BudgetExceeded",
    "CompletionRequest",
    "CompletionResult",
    "LiveTransport",
    "LlmClient",
    "RateLimited",
    "ReplayMiss",
    "ReplayTransport",
    "ScriptedTransport",
    "TransportError",
    "UnsplittableParagraph",
    "estimate_tokens",
    "fit_to_budget",
    "request_hash",
    "KIND_BY_METHOD",
    "LLM_METHODS",
    "summarize_section",
    "LANGUAGES",
    "TEMPLATE_NAMES",
    "MissingPlaceholder",
    "PromptTemplate",
    "escape_braces",
    "load_template",
    "render_prompt",
]
