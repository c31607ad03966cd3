"""Parsers for LLM summarization output.

Two shapes come back from the prompts: numbered score-tagged phrase
lists and the labeled issue structure (QDn/PDn with optional BTs and a
KW list). Parsing is deliberately tolerant: imperfect outputs should
still be evaluable, so label problems degrade to findings instead of
failures wherever the overall shape is recognizable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import TribsumError
from ..text import strip_brackets


class UnparseableOutput(TribsumError):
    """The output has none of the expected structure; raw text attached."""

    def __init__(self, reason: str, raw: str):
        self.raw = raw
        super().__init__(reason)


@dataclass(frozen=True)
class Violation:
    """A structural finding; severity is 'warning' or 'error'."""

    kind: str
    detail: str
    severity: str = "warning"


@dataclass
class LlmExtract:
    """Parsed numbered-phrase output: (rank, phrase, score) triples."""

    items: list[tuple[int, str, float]]
    source: tuple[str, str] | None = None


@dataclass
class Issue:
    index: int
    qd: str = ""
    pd: str = ""
    bts: list[str] = field(default_factory=list)


@dataclass
class IssueSummary:
    """Issue-based summary: QD/PD pairs with supporting spans and keywords."""

    issues: list[Issue]
    keywords: list[str] = field(default_factory=list)
    findings: list[Violation] = field(default_factory=list)
    source: tuple[str, str] | None = None


_ITEM_LINE_RE = re.compile(r"^\s*(?:\[(\d+)\]|(\d+)[.)])\s*(.*\S)\s*$")
_SCORE_TAIL_RE = re.compile(
    r"\s*\[\s*(?:score|punteggio)?\s*[: ]?\s*([0-9]+(?:[.,][0-9]+)?)\s*\]\s*$",
    re.IGNORECASE,
)


def parse_llm_extract(text: str) -> LlmExtract:
    """Parse "[i] phrase [score]" lines; "i." numbering and missing
    scores are tolerated (a missing score defaults to 1.0)."""
    items: list[tuple[int, str, float]] = []
    pending: list[str] | None = None
    pending_score = 1.0

    def flush():
        if pending is not None:
            items.append((len(items) + 1, " ".join(pending), pending_score))

    for line in text.splitlines():
        m = _ITEM_LINE_RE.match(line)
        if m:
            flush()
            phrase = m.group(3)
            score = 1.0
            tail = _SCORE_TAIL_RE.search(phrase)
            if tail:
                score = float(tail.group(1).replace(",", "."))
                phrase = phrase[: tail.start()].rstrip()
            pending = [phrase]
            pending_score = score
        elif pending is not None and line.strip():
            pending.append(line.strip())
    flush()
    if not items:
        raise UnparseableOutput("no numbered phrase line found", text)
    return LlmExtract(items=items)


_LABEL_RE = re.compile(
    r"(?:\*\*)?\b(QD|PD|BT|KW)(\d+)?(?:\.(\d+))?(?:\*\*)?\s*:",
    re.IGNORECASE,
)


def parse_issue_summary(text: str) -> IssueSummary:
    """Parse the labeled QD/PD/BT/KW structure.

    Labels match anywhere in the text (several BTs may share a line),
    case-insensitively and with optional bold markers. "BTi.j" attaches
    to issue i; a plain "BTj" attaches to the issue currently open.
    Orphan labels become findings, not errors.
    """
    matches = list(_LABEL_RE.finditer(text))
    if not matches:
        raise UnparseableOutput("no QD/PD labels found", text)
    issues: dict[int, Issue] = {}
    keywords: list[str] = []
    findings: list[Violation] = []
    current = 0

    def issue(num: int) -> Issue:
        if num not in issues:
            issues[num] = Issue(index=num)
        return issues[num]

    for m, nxt in zip(matches, matches[1:] + [None]):
        label = m.group(1).upper()
        num = int(m.group(2)) if m.group(2) else None
        sub = int(m.group(3)) if m.group(3) else None
        end = nxt.start() if nxt is not None else len(text)
        content = text[m.end() : end].strip().rstrip("*").strip()
        if label == "QD":
            num = num or (current or 1)
            if issue(num).qd:
                findings.append(
                    Violation("DuplicateLabel", f"QD{num} appears more than once")
                )
            issue(num).qd = content
            current = num
        elif label == "PD":
            num = num or (current or 1)
            if issue(num).pd:
                findings.append(
                    Violation("DuplicateLabel", f"PD{num} appears more than once")
                )
            issue(num).pd = content
            current = num
        elif label == "BT":
            owner = num if sub is not None else (current or num or 1)
            issue(owner).bts.append(strip_brackets(content))
        elif label == "KW":
            for kw in strip_brackets(content).split(","):
                kw = kw.strip().strip("\"'`‘’“”").strip()
                if kw:
                    keywords.append(kw)

    ordered = [issues[n] for n in sorted(issues)]
    if not any(issue.qd or issue.pd for issue in ordered):
        raise UnparseableOutput("labels found but no issue content", text)
    for item in ordered:
        if item.qd and not item.pd:
            findings.append(
                Violation("OrphanLabel", f"QD{item.index} has no PD{item.index}")
            )
        elif item.pd and not item.qd:
            findings.append(
                Violation("OrphanLabel", f"PD{item.index} has no QD{item.index}")
            )
    return IssueSummary(issues=ordered, keywords=keywords, findings=findings)


def print_issue_summary(summary: IssueSummary) -> str:
    """Canonical QD/PD/BT/KW rendering; re-parsing yields the same structure."""
    blocks: list[str] = []
    for issue in summary.issues:
        lines: list[str] = []
        if issue.qd:
            lines.append(f"QD{issue.index}: {issue.qd}")
        if issue.pd:
            lines.append(f"PD{issue.index}: {issue.pd}")
        for j, bt in enumerate(issue.bts, start=1):
            lines.append(f"BT{issue.index}.{j}: [{bt}]")
        if lines:
            blocks.append("\n".join(lines))
    if summary.keywords:
        blocks.append("KW: [" + ", ".join(summary.keywords) + "]")
    return "\n\n".join(blocks)


def extract_from_payload(payload: dict) -> LlmExtract:
    """Rebuild an extract from a canonical summary record payload."""
    return LlmExtract(
        items=[
            (item.get("position", i + 1), item["text"], item.get("score", 1.0))
            for i, item in enumerate(payload.get("items", []))
        ]
    )


def issues_from_payload(payload: dict) -> IssueSummary:
    """Rebuild an issue summary from a canonical summary record payload."""
    return IssueSummary(
        issues=[
            Issue(
                index=entry.get("index", i + 1),
                qd=entry.get("qd", ""),
                pd=entry.get("pd", ""),
                bts=list(entry.get("bts", [])),
            )
            for i, entry in enumerate(payload.get("issues", []))
        ],
        keywords=list(payload.get("keywords", [])),
    )
