"""Court-decision corpus handling.

Raw decision text is split into the four canonical parts (introduction,
development of the proceeding, grounds of the decision, final ruling) by
matching configurable header patterns. Sections are segmented into
sentences with abbreviation-aware boundary detection, and corpora are
persisted as line-delimited JSON, one decision per line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import TribsumError
from .text import default_abbreviations


class SectionKind(str, Enum):
    INTRODUCTION = "introduction"
    DEVELOPMENT = "development"
    GROUNDS = "grounds"
    RULING = "ruling"


CANONICAL_ORDER = (
    SectionKind.INTRODUCTION,
    SectionKind.DEVELOPMENT,
    SectionKind.GROUNDS,
    SectionKind.RULING,
)


class NoSectionFound(TribsumError):
    """No header pattern matched; the text has no usable body section."""

    def __init__(self, patterns: Sequence[str]):
        self.patterns = list(patterns)
        super().__init__(
            "no section header matched; patterns tried: " + ", ".join(self.patterns)
        )


class MalformedRecord(TribsumError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"malformed corpus record at line {line}: {reason}")


# Header markers are matched case-insensitively at line starts. Court
# formatting varies by region, so the list is data and can be replaced
# wholesale via `HeaderPatterns` or the CLI --patterns file.
DEFAULT_HEADER_PATTERNS: dict[SectionKind, tuple[str, ...]] = {
    SectionKind.DEVELOPMENT: (
        r"svolgimento\s+del\s+processo",
        r"development\s+of\s+the\s+proceedings?",
        r"fatti?\s+di\s+causa",
    ),
    SectionKind.GROUNDS: (
        r"motivi\s+della\s+decisione",
        r"motivazione",
        r"grounds\s+(?:of|for)\s+the\s+decision",
        r"reasons\s+(?:of|for)\s+the\s+decision",
    ),
    SectionKind.RULING: (
        r"p\.\s*q\.\s*m\.",
        r"per\s+questi\s+motivi",
        r"final\s+ruling",
    ),
}


@dataclass
class HeaderPatterns:
    """Regex pattern lists that open each non-introduction section."""

    patterns: dict[SectionKind, tuple[str, ...]] = field(
        default_factory=lambda: dict(DEFAULT_HEADER_PATTERNS)
    )

    @classmethod
    def from_file(cls, path: str | Path) -> "HeaderPatterns":
        """Load a {section: [pattern, ...]} JSON file."""
        raw = json.loads(Path(path).read_text("utf-8"))
        return cls(
            {SectionKind(k): tuple(v) for k, v in raw.items()}
        )

    def all_patterns(self) -> list[str]:
        return [p for pats in self.patterns.values() for p in pats]


@dataclass(frozen=True)
class Sentence:
    """One sentence of a section, with its character span."""

    index: int
    text: str
    span: tuple[int, int]


@dataclass
class Decision:
    """A decision split into its canonical sections."""

    id: str
    court: str = ""
    instance: str = "first"  # first | second | cassation
    date: str | None = None
    sections: dict[SectionKind, str] = field(default_factory=dict)
    raw_text: str = ""

    def section(self, kind: SectionKind | str) -> str:
        return self.sections.get(SectionKind(kind), "")

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "court": self.court,
            "instance": self.instance,
            "date": self.date,
            "sections": {k.value: self.sections.get(k, "") for k in CANONICAL_ORDER},
            "raw_text": self.raw_text,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Decision":
        sections = {
            SectionKind(k): v for k, v in record.get("sections", {}).items() if v
        }
        return cls(
            id=record["id"],
            court=record.get("court", ""),
            instance=record.get("instance", "first"),
            date=record.get("date"),
            sections=sections,
            raw_text=record.get("raw_text", ""),
        )


def _find_headers(
    raw: str, patterns: HeaderPatterns
) -> list[tuple[int, int, SectionKind]]:
    """First line-initial match of each section kind, sorted by position.

    Headers must start a line so that an in-text mention of a section
    name does not open a section.
    """
    found: list[tuple[int, int, SectionKind]] = []
    for kind, pats in patterns.patterns.items():
        best: tuple[int, int] | None = None
        for pat in pats:
            anchored = rf"^[ \t]*(?:{pat})"
            m = re.search(anchored, raw, re.IGNORECASE | re.MULTILINE)
            if m and (best is None or m.start() < best[0]):
                best = (m.start(), m.end())
        if best:
            found.append((best[0], best[1], kind))
    found.sort()
    return found


def parse_decision(
    raw: str,
    patterns: HeaderPatterns | None = None,
    *,
    decision_id: str = "",
    court: str = "",
    date: str | None = None,
) -> Decision:
    """Split raw decision text into sections by header markers.

    Text between two headers belongs to the first of them; unmatched
    leading text becomes the introduction. Raises :class:`NoSectionFound`
    when neither a development nor a grounds section can be located.
    """
    patterns = patterns or HeaderPatterns()
    headers = _find_headers(raw, patterns)
    sections: dict[SectionKind, str] = {}
    if headers:
        intro = raw[: headers[0][0]].strip()
        if intro:
            sections[SectionKind.INTRODUCTION] = intro
        for i, (_, end, kind) in enumerate(headers):
            nxt = headers[i + 1][0] if i + 1 < len(headers) else len(raw)
            body = raw[end:nxt].strip()
            if body:
                sections[kind] = body
    if not sections.get(SectionKind.DEVELOPMENT) and not sections.get(
        SectionKind.GROUNDS
    ):
        raise NoSectionFound(patterns.all_patterns())
    return Decision(
        id=decision_id,
        court=court,
        instance=_guess_instance(raw),
        date=date,
        sections=sections,
        raw_text=raw,
    )


def _guess_instance(raw: str) -> str:
    head = raw[:400].lower()
    if "cassation" in head or "cassazione" in head:
        return "cassation"
    if "second instance" in head or "secondo grado" in head:
        return "second"
    return "first"


_BOUNDARY_RE = re.compile(r"[.!?;][\"'»”’)\]]*\s+")
_OPEN_QUOTES = "\"'«“‘(["


def split_sentences(
    section_text: str, abbreviations: frozenset[str] | None = None
) -> list[Sentence]:
    """Segment a section into sentences with exact character spans.

    A boundary is sentence-final punctuation followed by whitespace and
    an uppercase letter or opening quote, unless the word ending at the
    punctuation is a known abbreviation ("art.", "d.p.r.", ...).
    """
    if not section_text.strip():
        return []
    abbreviations = abbreviations if abbreviations is not None else default_abbreviations()

    boundaries: list[int] = []  # end offset (exclusive) of each sentence
    for m in _BOUNDARY_RE.finditer(section_text):
        nxt = m.end()
        if nxt >= len(section_text):
            continue
        follower = section_text[nxt]
        if not (follower.isupper() or follower in _OPEN_QUOTES):
            continue
        if section_text[m.start()] == "." and _ends_with_abbreviation(
            section_text, m.start(), abbreviations
        ):
            continue
        boundaries.append(m.start() + len(m.group().rstrip()))

    sentences: list[Sentence] = []
    cursor = 0
    for end in boundaries + [len(section_text)]:
        chunk = section_text[cursor:end]
        stripped = chunk.strip()
        if stripped:
            start = cursor + (len(chunk) - len(chunk.lstrip()))
            stop = start + len(stripped)
            sentences.append(Sentence(len(sentences), stripped, (start, stop)))
        cursor = end
    return sentences


def _ends_with_abbreviation(
    text: str, dot_pos: int, abbreviations: frozenset[str]
) -> bool:
    """True if the token ending at text[dot_pos] == '.' is an abbreviation."""
    start = dot_pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start : dot_pos + 1].lower()
    if word in abbreviations:
        return True
    # "dell'art." carries the abbreviation after an apostrophe
    for sep in ("'", "’"):
        if sep in word and word.rsplit(sep, 1)[-1] in abbreviations:
            return True
    return False


def save_corpus(decisions: Iterable[Decision], path: str | Path) -> None:
    """Write decisions as line-delimited JSON records."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for decision in decisions:
            fh.write(json.dumps(decision.to_record(), ensure_ascii=False) + "\n")


def load_corpus(path: str | Path) -> list[Decision]:
    """Read a line-delimited corpus file; raises MalformedRecord with the line number."""
    decisions = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                decisions.append(Decision.from_record(record))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise MalformedRecord(lineno, str(exc)) from exc
    return decisions
