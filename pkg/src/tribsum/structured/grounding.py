"""Verbatim-grounding verification of summary spans against the source.

Every claimed source span (BT or extracted phrase) receives exactly one
verdict: exact substring, substring after glyph/whitespace
normalization, fuzzy (token-LCS similarity against the best-aligned
source window) or ungrounded. The LCS kernel is the shared one in
tribsum.text; similarity at or above the threshold counts as fuzzy.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from ..text import lcs_ratio, normalize_with_map, strip_brackets, tokenize
from .parsers import IssueSummary, LlmExtract, Violation

_TOKEN_SPAN_RE = re.compile(r"[^\W_]+", re.UNICODE)

FUZZY_THRESHOLD = 0.95
_CANDIDATE_WINDOWS = 8


class Verdict(str, Enum):
    EXACT = "exact"
    NORMALIZED = "normalized"
    FUZZY = "fuzzy"
    UNGROUNDED = "ungrounded"


@dataclass(frozen=True)
class SpanVerdict:
    """Verdict for one claimed span."""

    ref: str
    verdict: Verdict
    similarity: float | None = None
    span: tuple[int, int] | None = None


@dataclass
class GroundingReport:
    verdicts: list[SpanVerdict] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    @property
    def all_grounded(self) -> bool:
        return all(v.verdict is not Verdict.UNGROUNDED for v in self.verdicts)

    def to_record(self) -> dict:
        return {
            "verdicts": [
                {
                    "ref": v.ref,
                    "verdict": v.verdict.value,
                    "similarity": v.similarity,
                    "span": list(v.span) if v.span else None,
                }
                for v in self.verdicts
            ],
            "violations": [
                {"kind": f.kind, "detail": f.detail, "severity": f.severity}
                for f in self.violations
            ],
        }


class _SourceIndex:
    """Pre-computed views of the source text used by every span check."""

    def __init__(self, source: str):
        self.source = source
        self.norm, self.norm_map = normalize_with_map(source)
        self.tokens = []
        self.token_spans = []
        for m in _TOKEN_SPAN_RE.finditer(source):
            self.tokens.append(m.group().lower())
            self.token_spans.append((m.start(), m.end()))


def verify_grounding(
    summary: IssueSummary | LlmExtract,
    source: str,
    fuzzy_threshold: float = FUZZY_THRESHOLD,
) -> GroundingReport:
    """Check every BT (or extracted phrase) against the prompt source."""
    index = _SourceIndex(source)
    report = GroundingReport()
    if isinstance(summary, IssueSummary):
        for issue in summary.issues:
            for j, bt in enumerate(issue.bts, start=1):
                report.verdicts.append(
                    _check_span(f"issue{issue.index}.bt{j}", bt, index, fuzzy_threshold)
                )
    else:
        spans: list[tuple[int, tuple[int, int]]] = []
        for rank, phrase, _score in summary.items:
            verdict = _check_span(f"phrase{rank}", phrase, index, fuzzy_threshold)
            report.verdicts.append(verdict)
            if verdict.span is not None:
                spans.append((rank, verdict.span))
        spans.sort(key=lambda item: item[0])
        starts = [span[0] for _, span in spans]
        if any(b < a for a, b in zip(starts, starts[1:])):
            report.violations.append(
                Violation(
                    "OrderViolation",
                    "matched spans are not in source order",
                    severity="warning",
                )
            )
    return report


def _check_span(
    ref: str, claimed: str, index: _SourceIndex, fuzzy_threshold: float
) -> SpanVerdict:
    claimed = claimed.strip()
    if not claimed:
        return SpanVerdict(ref, Verdict.UNGROUNDED, similarity=0.0)

    pos = index.source.find(claimed)
    if pos >= 0:
        return SpanVerdict(
            ref, Verdict.EXACT, similarity=1.0, span=(pos, pos + len(claimed))
        )

    norm_claimed, _ = normalize_with_map(strip_brackets(claimed))
    if norm_claimed:
        npos = index.norm.find(norm_claimed)
        if npos >= 0:
            start = index.norm_map[npos]
            end = index.norm_map[npos + len(norm_claimed) - 1] + 1
            return SpanVerdict(
                ref, Verdict.NORMALIZED, similarity=1.0, span=(start, end)
            )

    similarity, span = _best_window(claimed, index)
    if similarity >= fuzzy_threshold:
        return SpanVerdict(ref, Verdict.FUZZY, similarity=similarity, span=span)
    return SpanVerdict(ref, Verdict.UNGROUNDED, similarity=similarity)


def _best_window(
    claimed: str, index: _SourceIndex
) -> tuple[float, tuple[int, int] | None]:
    """Best token-LCS ratio over source windows sized near the claim.

    Candidate windows are pre-ranked by shared-token counts (a rolling
    multiset intersection) so the quadratic LCS runs only on the most
    promising alignments.
    """
    claim_tokens = tokenize(strip_brackets(claimed))
    n = len(index.tokens)
    m = len(claim_tokens)
    if m == 0 or n == 0:
        return 0.0, None
    claim_counts = Counter(claim_tokens)
    best_ratio = 0.0
    best_span: tuple[int, int] | None = None
    for width in range(max(1, m - 2), min(n, m + 2) + 1):
        candidates = _rank_starts(index.tokens, claim_counts, width)
        for start in candidates:
            window = index.tokens[start : start + width]
            ratio = lcs_ratio(claim_tokens, window)
            if ratio > best_ratio:
                best_ratio = ratio
                char_start = index.token_spans[start][0]
                char_end = index.token_spans[start + width - 1][1]
                best_span = (char_start, char_end)
                if best_ratio == 1.0:
                    return best_ratio, best_span
    return best_ratio, best_span


def _rank_starts(
    tokens: list[str], claim_counts: Counter, width: int
) -> list[int]:
    """Window starts with the highest shared-token counts, best first."""
    n = len(tokens)
    if width >= n:
        return [0]
    window = Counter(tokens[:width])
    overlap = sum(min(c, claim_counts[t]) for t, c in window.items())
    scored = [(overlap, 0)]
    for start in range(1, n - width + 1):
        out_tok = tokens[start - 1]
        in_tok = tokens[start + width - 1]
        if out_tok != in_tok:
            if window[out_tok] <= claim_counts[out_tok]:
                overlap -= 1
            window[out_tok] -= 1
            if window[out_tok] == 0:
                del window[out_tok]
            window[in_tok] += 1
            if window[in_tok] <= claim_counts[in_tok]:
                overlap += 1
        scored.append((overlap, start))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [start for _, start in scored[:_CANDIDATE_WINDOWS]]
