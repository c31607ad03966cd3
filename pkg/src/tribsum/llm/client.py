"""Chat-completion client with retries, budgets and record/replay.

The transport is pluggable: live HTTP (OpenAI-compatible), replay from a
line-delimited fixture file, or a scripted transcript for tests. Replay
is the CI default; live calls happen only when explicitly requested.
Credentials never reach logs or fixture files; recorded requests carry a
redaction marker instead.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from ..errors import TribsumError

logger = logging.getLogger(__name__)

REDACTED = "[redacted]"


class TransportError(TribsumError):
    """Transient transport failure (timeout, connection error, 5xx)."""


class RateLimited(TransportError):
    """HTTP 429 or provider rate limiting."""


class AuthError(TribsumError):
    """Credential missing or rejected; never retried."""


class BudgetExceeded(TribsumError):
    """Estimated input tokens exceed the configured budget."""


class UnsplittableParagraph(TribsumError):
    """A single paragraph alone exceeds the chunking budget."""


class ReplayMiss(TransportError):
    """No recorded result for this request in the replay fixture."""


@dataclass(frozen=True)
class CompletionRequest:
    model: str
    messages: tuple[tuple[str, str], ...]  # (role, content) pairs
    temperature: float = 0.0
    max_output_tokens: int = 1024

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    @classmethod
    def user(cls, model: str, prompt: str, **kwargs) -> "CompletionRequest":
        return cls(model=model, messages=(("user", prompt),), **kwargs)

    def to_record(self) -> dict:
        return {
            "model": self.model,
            "messages": [{"role": r, "content": c} for r, c in self.messages],
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "credential": REDACTED,
        }


@dataclass
class CompletionResult:
    text: str
    usage: tuple[int, int] = (0, 0)  # (input_tokens, output_tokens)
    provider_meta: dict = field(default_factory=dict)
    attempts: int = 1

    def to_record(self) -> dict:
        return {
            "text": self.text,
            "usage": {"input_tokens": self.usage[0], "output_tokens": self.usage[1]},
            "provider_meta": self.provider_meta,
        }

    @classmethod
    def from_record(cls, record: dict) -> "CompletionResult":
        usage = record.get("usage", {})
        return cls(
            text=record["text"],
            usage=(usage.get("input_tokens", 0), usage.get("output_tokens", 0)),
            provider_meta=record.get("provider_meta", {}),
        )


_TOKEN_EST_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def estimate_tokens(text: str) -> int:
    """Deterministic provider-independent token estimate.

    Counts word runs and individual punctuation marks; whitespace is
    free. Intentionally coarse: it only has to be stable and monotone in
    text length so budgets are enforceable offline.
    """
    return len(_TOKEN_EST_RE.findall(text))


def request_hash(request: CompletionRequest) -> str:
    payload = {
        "model": request.model,
        "messages": [{"role": r, "content": c} for r, c in request.messages],
        "temperature": request.temperature,
        "max_output_tokens": request.max_output_tokens,
    }
    canon = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


class LiveTransport:
    """OpenAI-compatible chat-completions endpoint over HTTP."""

    def __init__(
        self,
        base_url: str,
        credential_env: str = "LLM_API_KEY",
        timeout: float = 60.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.credential_env = credential_env
        self.timeout = timeout

    def send(self, request: CompletionRequest) -> CompletionResult:
        import httpx

        credential = os.environ.get(self.credential_env, "")
        if not credential:
            raise AuthError(
                f"no credential in environment variable {self.credential_env}"
            )
        body = {
            "model": request.model,
            "messages": [{"role": r, "content": c} for r, c in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers={"Authorization": f"Bearer {credential}"},
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"transport failure: {type(exc).__name__}") from exc
        if response.status_code in (401, 403):
            raise AuthError(f"credential rejected ({response.status_code})")
        if response.status_code == 429:
            raise RateLimited("rate limited by provider")
        if response.status_code >= 500:
            raise TransportError(f"server error {response.status_code}")
        if response.status_code != 200:
            raise TribsumError(f"unexpected status {response.status_code}")
        data = response.json()
        usage = data.get("usage", {})
        return CompletionResult(
            text=data["choices"][0]["message"]["content"],
            usage=(usage.get("prompt_tokens", 0), usage.get("completion_tokens", 0)),
            provider_meta={"id": data.get("id", "")},
        )


class ReplayTransport:
    """Serve recorded results keyed by request hash; miss is an error."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._records: dict[str, dict] = {}
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        record = json.loads(line)
                        self._records[record["request_hash"]] = record

    def send(self, request: CompletionRequest) -> CompletionResult:
        key = request_hash(request)
        record = self._records.get(key)
        if record is None:
            raise ReplayMiss(f"no recorded completion for request {key[:12]}…")
        return CompletionResult.from_record(record["result"])


class ScriptedTransport:
    """Test transport that replays a fixed transcript of outcomes."""

    def __init__(self, outcomes: Sequence[CompletionResult | Exception]):
        self.outcomes = list(outcomes)
        self.calls = 0

    def send(self, request: CompletionRequest) -> CompletionResult:
        if self.calls >= len(self.outcomes):
            raise TransportError("scripted transcript exhausted")
        outcome = self.outcomes[self.calls]
        self.calls += 1
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


class LlmClient:
    """Retrying completion client with bounded concurrency.

    Transient failures (timeouts, 429, 5xx) retry with exponential
    backoff plus jitter, up to max_attempts. Auth and budget errors
    surface immediately. When record_path is set, every successful call
    is appended to the fixture file for later replay.
    """

    def __init__(
        self,
        transport,
        max_attempts: int = 5,
        backoff_base: float = 0.5,
        input_budget: int = 120_000,
        concurrency: int = 4,
        record_path: str | Path | None = None,
        sleeper: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        self.transport = transport
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self.input_budget = input_budget
        self.record_path = Path(record_path) if record_path else None
        self._sleep = sleeper
        self._rng = rng or random.Random()
        self._semaphore = threading.BoundedSemaphore(concurrency)
        self._record_lock = threading.Lock()

    def complete(self, request: CompletionRequest) -> CompletionResult:
        input_tokens = sum(estimate_tokens(c) for _, c in request.messages)
        if input_tokens > self.input_budget:
            raise BudgetExceeded(
                f"estimated {input_tokens} input tokens exceed budget {self.input_budget}"
            )
        last_error: Exception | None = None
        for attempt in range(1, self.max_attempts + 1):
            try:
                with self._semaphore:
                    result = self.transport.send(request)
            except (RateLimited, TransportError) as exc:
                last_error = exc
                if attempt == self.max_attempts:
                    break
                delay = self.backoff_base * (2 ** (attempt - 1))
                delay += self._rng.uniform(0, self.backoff_base)
                logger.warning(
                    "completion attempt %d/%d failed (%s); retrying in %.2fs",
                    attempt, self.max_attempts, type(exc).__name__, delay,
                )
                self._sleep(delay)
                continue
            result.attempts = attempt
            self._record(request, result)
            return result
        assert last_error is not None
        raise last_error

    def _record(self, request: CompletionRequest, result: CompletionResult) -> None:
        if self.record_path is None:
            return
        record = {
            "request_hash": request_hash(request),
            "request": request.to_record(),
            "result": result.to_record(),
            "attempts": result.attempts,
        }
        line = json.dumps(record, ensure_ascii=False)
        with self._record_lock, self.record_path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def fit_to_budget(
    text: str, budget_tokens: int, policy: str = "fail"
) -> list[str]:
    """Fit text into the token budget.

    policy "fail" raises when the text is over budget; policy "split"
    greedily packs whole paragraphs into chunks of at most
    budget_tokens. A single paragraph larger than the budget cannot be
    split further and is an error.
    """
    if budget_tokens < 1:
        raise ValueError("budget_tokens must be >= 1")
    if estimate_tokens(text) <= budget_tokens:
        return [text]
    if policy == "fail":
        raise BudgetExceeded(
            f"text of ~{estimate_tokens(text)} tokens exceeds budget {budget_tokens}"
        )
    if policy != "split":
        raise ValueError(f"unknown budget policy {policy!r}")
    paragraphs = re.split(r"\n\s*\n", text)
    chunks: list[str] = []
    current: list[str] = []
    current_tokens = 0
    for para in paragraphs:
        para_tokens = estimate_tokens(para)
        if para_tokens > budget_tokens:
            raise UnsplittableParagraph(
                f"paragraph of ~{para_tokens} tokens exceeds budget {budget_tokens}"
            )
        if current and current_tokens + para_tokens > budget_tokens:
            chunks.append("\n\n".join(current))
            current = []
            current_tokens = 0
        current.append(para)
        current_tokens += para_tokens
    if current:
        chunks.append("\n\n".join(current))
    return chunks
