"""Classical extractive scorers behind a sklearn-style estimator API.

Each scorer is a stateless transformer: `transform(sentences)` returns a
per-sentence relevance vector normalized so the best sentence scores 1,
and `extract(sentences, k)` materializes a ScoredExtract whose items are
re-sorted into source order. Constructor arguments are plain parameters,
so `get_params` / `set_params` and cloning work as usual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .kernels import (
    EmptyInput,
    build_matrix,
    content_tokens,
    cosine_graph,
    cosine_threshold_graph,
    overlap_graph,
    power_iteration,
    resolve_stopwords,
)
from ..text import tokenize


@dataclass
class ScoredExtract:
    """An ordered extract: (sentence_index, score) pairs in source order."""

    method: str
    k: int
    items: list[tuple[int, float]] = field(default_factory=list)
    source: tuple[str, str] | None = None  # (decision_id, section)


def check_sentences(sentences: Sequence[str]) -> list[str]:
    """Validate the estimator input: a non-empty sequence of strings."""
    if isinstance(sentences, str):
        raise TypeError("expected a sequence of sentences, got a single string")
    out = list(sentences)
    if not out:
        raise EmptyInput("at least one sentence is required")
    for s in out:
        if not isinstance(s, str):
            raise TypeError(f"sentences must be strings, got {type(s).__name__}")
    return out


def top_k_indices(scores: Sequence[float], k: int) -> list[int]:
    """Indices of the k best scores, ties to the lower index, sorted ascending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return sorted(order[: min(k, len(scores))])


def select_top_k(
    scores: Sequence[float],
    k: int,
    method: str = "",
    source: tuple[str, str] | None = None,
) -> ScoredExtract:
    """Pick the k best sentences and renormalize their scores to max 1."""
    chosen = top_k_indices(scores, k)
    picked = [(i, float(scores[i])) for i in chosen]
    top = max((s for _, s in picked), default=0.0)
    if top > 0:
        picked = [(i, s / top) for i, s in picked]
    return ScoredExtract(method=method, k=k, items=picked, source=source)


def _normalize_max(scores: np.ndarray) -> np.ndarray:
    top = scores.max() if scores.size else 0.0
    return scores / top if top > 0 else scores


class SentenceScorer(TransformerMixin, BaseEstimator):
    """Base class: fit is validation only, transform returns scores."""

    method_id = ""

    def fit(self, X: Sequence[str], y=None) -> "SentenceScorer":
        check_sentences(X)
        return self

    def transform(self, X: Sequence[str]) -> np.ndarray:
        sentences = check_sentences(X)
        return _normalize_max(self._score(sentences))

    def _score(self, sentences: list[str]) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def extract(
        self, X: Sequence[str], k: int | None = None,
        source: tuple[str, str] | None = None,
    ) -> ScoredExtract:
        k = self.k if k is None else k
        return select_top_k(self.transform(X), k, self.method_id, source)


class LexRankScorer(SentenceScorer):
    """Graph centrality over thresholded tf-isf cosine similarity."""

    method_id = "lexrank"

    def __init__(self, k=5, threshold=0.1, damping=0.85, continuous=False,
                 eps=1e-8, max_iter=200, stopwords=None):
        self.k = k
        self.threshold = threshold
        self.damping = damping
        self.continuous = continuous
        self.eps = eps
        self.max_iter = max_iter
        self.stopwords = stopwords

    def _score(self, sentences):
        matrix = build_matrix(sentences, "tf_isf", self.stopwords)
        if self.continuous:
            graph = cosine_graph(matrix)
        else:
            graph = cosine_threshold_graph(matrix, self.threshold)
        return power_iteration(graph, self.damping, self.eps, self.max_iter)


class TextRankScorer(SentenceScorer):
    """Graph centrality over word-overlap similarity."""

    method_id = "textrank"

    def __init__(self, k=5, damping=0.85, eps=1e-8, max_iter=200, stopwords=None):
        self.k = k
        self.damping = damping
        self.eps = eps
        self.max_iter = max_iter
        self.stopwords = stopwords

    def _score(self, sentences):
        tokens = content_tokens(sentences, self.stopwords)
        graph = overlap_graph(tokens)
        return power_iteration(graph, self.damping, self.eps, self.max_iter)


class FreqScorer(SentenceScorer):
    """TextRank variant: centrality over raw term-frequency cosine."""

    method_id = "freq"

    def __init__(self, k=5, damping=0.85, eps=1e-8, max_iter=200, stopwords=None):
        self.k = k
        self.damping = damping
        self.eps = eps
        self.max_iter = max_iter
        self.stopwords = stopwords

    def _score(self, sentences):
        matrix = build_matrix(sentences, "tf", self.stopwords)
        graph = cosine_graph(matrix)
        return power_iteration(graph, self.damping, self.eps, self.max_iter)


class LuhnScorer(SentenceScorer):
    """Significant-word cluster scoring.

    A word is significant when its corpus frequency reaches
    max(2, min_freq_ratio * n_sentences); within a sentence, clusters of
    significant words separated by at most max_gap insignificant words
    score count^2 / span.
    """

    method_id = "luhn"

    def __init__(self, k=5, min_freq_ratio=0.1, max_gap=4, stopwords=None):
        self.k = k
        self.min_freq_ratio = min_freq_ratio
        self.max_gap = max_gap
        self.stopwords = stopwords

    def _score(self, sentences):
        sw = resolve_stopwords(self.stopwords)
        token_lists = [tokenize(s) for s in sentences]
        significant = significant_words(
            token_lists, self.min_freq_ratio, stopwords=sw
        )
        scores = np.array(
            [best_cluster_score(toks, significant, self.max_gap) for toks in token_lists]
        )
        return scores


def significant_words(
    token_lists: Sequence[Sequence[str]],
    min_freq_ratio: float = 0.1,
    stopwords: frozenset[str] | None = None,
) -> frozenset[str]:
    """Non-stopwords whose corpus frequency reaches the Luhn threshold."""
    sw = resolve_stopwords(stopwords)
    freq: dict[str, int] = {}
    for tokens in token_lists:
        for tok in tokens:
            if tok not in sw:
                freq[tok] = freq.get(tok, 0) + 1
    cutoff = max(2.0, min_freq_ratio * len(token_lists))
    return frozenset(w for w, c in freq.items() if c >= cutoff)


def best_cluster_score(
    tokens: Sequence[str], significant: frozenset[str], max_gap: int = 4
) -> float:
    """Best count^2/span over maximal significant-word clusters."""
    positions = [i for i, tok in enumerate(tokens) if tok in significant]
    if not positions:
        return 0.0
    best = 0.0
    start = positions[0]
    prev = positions[0]
    count = 1
    for pos in positions[1:]:
        if pos - prev - 1 <= max_gap:
            count += 1
        else:
            best = max(best, count * count / (prev - start + 1))
            start = pos
            count = 1
        prev = pos
    best = max(best, count * count / (prev - start + 1))
    return best


class LsaScorer(SentenceScorer):
    """Latent semantic scoring via SVD of the tf-isf matrix.

    Scores are singular-value-weighted L2 norms of each sentence's
    coordinates in the top min(k, rank) latent topics. Extraction picks,
    per topic in decreasing singular-value order, the unselected
    sentence with the largest absolute component, then fills any
    remaining slots by descending score.
    """

    method_id = "lsa"

    def __init__(self, k=5, stopwords=None):
        self.k = k
        self.stopwords = stopwords

    def _decompose(self, sentences):
        matrix = build_matrix(sentences, "tf_isf", self.stopwords)
        if matrix.terms and not matrix.weights.any():
            # tf-isf vanishes when every term occurs in every sentence
            # (single sentence, scalar-multiple corpora); raw counts
            # keep the geometry meaningful there.
            matrix = build_matrix(sentences, "tf", self.stopwords)
        if not matrix.terms or not matrix.weights.any():
            n = len(sentences)
            return np.zeros(0), np.zeros((0, n))
        _, s, vt = np.linalg.svd(matrix.weights, full_matrices=False)
        rank = int((s > s[0] * 1e-12).sum()) if s.size else 0
        return s[:rank], vt[:rank]

    def _score(self, sentences):
        s, vt = self._decompose(sentences)
        m = min(self.k, len(s))
        if m == 0:
            return np.zeros(len(sentences))
        weighted = (s[:m, None] * vt[:m]) ** 2
        return np.sqrt(weighted.sum(axis=0))

    def extract(self, X, k=None, source=None):
        sentences = check_sentences(X)
        k = self.k if k is None else k
        if k < 1:
            raise ValueError("k must be >= 1")
        s, vt = self._decompose(sentences)
        scores = self._score(sentences)
        n = len(sentences)
        chosen: list[int] = []
        for r in range(min(k, len(s), n)):
            remaining = [j for j in range(n) if j not in chosen]
            chosen.append(max(remaining, key=lambda j: (abs(vt[r, j]), -j)))
        if len(chosen) < min(k, n):
            remaining = [j for j in range(n) if j not in chosen]
            remaining.sort(key=lambda j: (-scores[j], j))
            chosen.extend(remaining[: min(k, n) - len(chosen)])
        picked = [(j, float(scores[j])) for j in sorted(chosen)]
        top = max((sc for _, sc in picked), default=0.0)
        if top > 0:
            picked = [(j, sc / top) for j, sc in picked]
        return ScoredExtract(self.method_id, k, picked, source)


CLASSICAL_SCORERS: dict[str, type[SentenceScorer]] = {
    cls.method_id: cls
    for cls in (LexRankScorer, TextRankScorer, LsaScorer, LuhnScorer, FreqScorer)
}


def make_scorer(method: str, **params) -> SentenceScorer:
    """Instantiate a registered scorer by method id."""
    try:
        cls = CLASSICAL_SCORERS[method]
    except KeyError:
        raise ValueError(f"unknown extractive method {method!r}") from None
    accepted = cls().get_params()
    kwargs = {k: v for k, v in params.items() if k in accepted}
    return cls(**kwargs)


def luhn_cluster_score(count: int, span: int) -> float:
    """The Luhn cluster formula: significant-count squared over span."""
    if span < 1:
        raise ValueError("span must be >= 1")
    return count * count / span
