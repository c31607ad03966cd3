"""LLM summarization pipeline: prompt, complete, parse.

Produces canonical summary payloads for the three prompt-driven
methods. Long inputs follow a map-reduce path: paragraph-aligned chunks
are summarized separately and merged by one more flowing pass; the
output is flagged accordingly.
"""

from __future__ import annotations

from .client import CompletionRequest, LlmClient, estimate_tokens, fit_to_budget
from .templates import load_template, render_prompt
from ..methods import LLM_METHOD_IDS as LLM_METHODS
from ..structured.parsers import parse_issue_summary, parse_llm_extract

KIND_BY_METHOD = {
    "llm-extractive": "extractive",
    "llm-flowing": "flowing",
    "llm-issues": "issues",
}


def _complete_prompt(client: LlmClient, model: str, prompt: str,
                     max_output_tokens: int) -> str:
    request = CompletionRequest.user(
        model, prompt, max_output_tokens=max_output_tokens
    )
    return client.complete(request).text


def summarize_section(
    client: LlmClient,
    method: str,
    text: str,
    *,
    model: str,
    k: int = 5,
    language: str = "it",
    max_output_tokens: int = 1024,
) -> dict:
    """Run one LLM method over one section; returns the payload dict."""
    if method == "llm-extractive":
        prompt = render_prompt(load_template("extractive_k", language), text, k=k)
        raw = _complete_prompt(client, model, prompt, max_output_tokens)
        extract = parse_llm_extract(raw)
        return {
            "kind": "extractive",
            "items": [
                {"position": rank, "text": phrase, "score": score}
                for rank, phrase, score in extract.items
            ],
            "raw_text": raw,
        }
    if method == "llm-flowing":
        return _flowing(client, text, model=model, language=language,
                        max_output_tokens=max_output_tokens)
    if method == "llm-issues":
        prompt = render_prompt(load_template("issues_kw_bt", language), text)
        raw = _complete_prompt(client, model, prompt, max_output_tokens)
        summary = parse_issue_summary(raw)
        return {
            "kind": "issues",
            "issues": [
                {"index": issue.index, "qd": issue.qd, "pd": issue.pd,
                 "bts": list(issue.bts)}
                for issue in summary.issues
            ],
            "keywords": list(summary.keywords),
            "findings": [
                {"kind": f.kind, "detail": f.detail, "severity": f.severity}
                for f in summary.findings
            ],
            "raw_text": raw,
        }
    raise ValueError(f"unknown llm method {method!r}")


def _flowing(
    client: LlmClient,
    text: str,
    *,
    model: str,
    language: str,
    max_output_tokens: int,
) -> dict:
    template = load_template("flowing", language)
    overhead = estimate_tokens(render_prompt(template, "")) + 16
    budget = max(1, client.input_budget - overhead)
    chunks = fit_to_budget(text, budget, policy="split")
    if len(chunks) == 1:
        prompt = render_prompt(template, chunks[0])
        summary = _complete_prompt(client, model, prompt, max_output_tokens)
        return {"kind": "flowing", "text": summary, "chunked": False}
    partials = []
    for chunk in chunks:
        prompt = render_prompt(template, chunk)
        partials.append(_complete_prompt(client, model, prompt, max_output_tokens))
    merge_prompt = render_prompt(template, "\n\n".join(partials))
    merged = _complete_prompt(client, model, merge_prompt, max_output_tokens)
    return {"kind": "flowing", "text": merged, "chunked": True,
            "chunk_count": len(chunks)}
