"""Shared text kernels: tokenization, normalization, LCS.

These primitives are used by the extractive scorers, the grounding
verifier and the ROUGE metrics, so they live in one place. The
longest-common-subsequence kernel here is the single implementation
backing both grounding similarity and ROUGE-L.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

# Letter/digit runs; underscore is a separator so anonymization
# placeholders like "respondent_1" split into ("respondent", "1").
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_QUOTE_CHARS = "‘’‚‛′`´"
_DQUOTE_CHARS = "“”„‟″«»"
_DASH_CHARS = "‐‑‒–—―−"


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercased letter/digit runs, accents preserved.

    When *stopwords* is given, tokens contained in it are dropped.
    """
    tokens = _TOKEN_RE.findall(text.lower())
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return tokens


def _load_wordlist(name: str) -> frozenset[str]:
    data = resources.files("tribsum.data").joinpath(name).read_text("utf-8")
    words = set()
    for line in data.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    """Bundled Italian + English stopword list."""
    return _load_wordlist("stopwords_it.txt") | _load_wordlist("stopwords_en.txt")


@lru_cache(maxsize=None)
def default_abbreviations() -> frozenset[str]:
    """Bundled sentence-internal abbreviations (lowercase, trailing dot)."""
    return _load_wordlist("abbreviations.txt")


def normalize(text: str) -> str:
    """Lowercase, collapse whitespace, unify quote and dash glyphs."""
    normalized, _ = normalize_with_map(text)
    return normalized


def normalize_with_map(text: str) -> tuple[str, list[int]]:
    """Normalize *text* and return an index map back to the original.

    ``map[i]`` is the offset in *text* of the character that produced
    position ``i`` of the normalized string. Whitespace runs collapse to
    one space (mapped to the run's first character), quote variants fold
    to "'" or '"', dash variants to "-".
    """
    out: list[str] = []
    idx: list[int] = []
    in_space = False
    for pos, ch in enumerate(text):
        if ch.isspace():
            if not in_space and out:
                out.append(" ")
                idx.append(pos)
            in_space = True
            continue
        in_space = False
        if ch in _QUOTE_CHARS:
            ch = "'"
        elif ch in _DQUOTE_CHARS:
            ch = '"'
        elif ch in _DASH_CHARS:
            ch = "-"
        else:
            ch = ch.lower()
        out.append(ch)
        idx.append(pos)
    # drop a trailing collapsed space
    if out and out[-1] == " ":
        out.pop()
        idx.pop()
    return "".join(out), idx


def strip_brackets(text: str) -> str:
    """Remove one pair of surrounding brackets or quotes, if present."""
    text = text.strip()
    pairs = {"[": "]", "(": ")", "{": "}", '"': '"', "'": "'"}
    while len(text) >= 2 and text[0] in pairs and text[-1] == pairs[text[0]]:
        text = text[1:-1].strip()
    return text


def lcs_length(a: list[str], b: list[str]) -> int:
    """Length of the longest common subsequence of two token lists.

    Classic O(len(a)*len(b)) dynamic program, two-row memory.
    """
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def lcs_ratio(a: list[str], b: list[str]) -> float:
    """LCS length over the longer of the two lengths, in [0, 1]."""
    if not a or not b:
        return 0.0
    return lcs_length(a, b) / max(len(a), len(b))
