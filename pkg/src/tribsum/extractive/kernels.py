"""Numerical kernels shared by the extractive scorers.

Term/sentence weighting, cosine similarity, sentence-similarity graphs
and the damped power iteration that ranks graph nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import TribsumError
from ..text import default_stopwords, tokenize


class EmptyInput(TribsumError):
    """An operation that needs at least one sentence received none."""


class NoConvergence(TribsumError):
    """Power iteration did not reach the tolerance within max_iter."""

    def __init__(self, max_iter: int, last_iterate: np.ndarray):
        self.max_iter = max_iter
        self.last_iterate = last_iterate
        super().__init__(f"no convergence after {max_iter} iterations")


@dataclass
class TermSentenceMatrix:
    """Dense term-by-sentence weight matrix.

    Rows follow `terms` (first-appearance order), columns follow the
    input sentence order. Weighting is raw term frequency or
    tf * ln(N / sentence-frequency).
    """

    terms: list[str]
    weights: np.ndarray  # shape (len(terms), n_sentences)
    weighting: str  # "tf" | "tf_isf"


def resolve_stopwords(stopwords: frozenset[str] | None) -> frozenset[str]:
    return default_stopwords() if stopwords is None else stopwords


def content_tokens(
    sentences: Sequence[str], stopwords: frozenset[str] | None = None
) -> list[list[str]]:
    """Tokenize each sentence and drop stopwords."""
    sw = resolve_stopwords(stopwords)
    return [tokenize(s, sw) for s in sentences]


def build_matrix(
    sentences: Sequence[str],
    weighting: str = "tf",
    stopwords: frozenset[str] | None = None,
) -> TermSentenceMatrix:
    """Build the term/sentence matrix over content tokens.

    tf_isf multiplies each term row by ln(N / sf); a term present in
    every sentence therefore weighs zero everywhere.
    """
    if not sentences:
        raise EmptyInput("build_matrix requires at least one sentence")
    if weighting not in ("tf", "tf_isf"):
        raise ValueError(f"unknown weighting {weighting!r}")
    token_lists = content_tokens(sentences, stopwords)
    terms: list[str] = []
    index: dict[str, int] = {}
    for tokens in token_lists:
        for tok in tokens:
            if tok not in index:
                index[tok] = len(terms)
                terms.append(tok)
    weights = np.zeros((len(terms), len(sentences)))
    for j, tokens in enumerate(token_lists):
        for tok in tokens:
            weights[index[tok], j] += 1.0
    if weighting == "tf_isf":
        n = len(sentences)
        sf = (weights > 0).sum(axis=1)
        with np.errstate(divide="ignore"):
            isf = np.where(sf > 0, np.log(n / np.maximum(sf, 1)), 0.0)
        weights = weights * isf[:, None]
    return TermSentenceMatrix(terms, weights, weighting)


def cosine(col_i: np.ndarray, col_j: np.ndarray) -> float:
    """Cosine similarity; 0 when either vector is all-zero."""
    ni = float(np.linalg.norm(col_i))
    nj = float(np.linalg.norm(col_j))
    if ni == 0.0 or nj == 0.0:
        return 0.0
    return float(np.dot(col_i, col_j) / (ni * nj))


def cosine_matrix(matrix: TermSentenceMatrix) -> np.ndarray:
    """All pairwise column cosines, diagonal zeroed."""
    w = matrix.weights
    norms = np.linalg.norm(w, axis=0)
    safe = np.where(norms == 0, 1.0, norms)
    unit = w / safe
    sims = unit.T @ unit
    sims[norms == 0, :] = 0.0
    sims[:, norms == 0] = 0.0
    np.fill_diagonal(sims, 0.0)
    return np.clip(sims, 0.0, 1.0)


@dataclass
class SimilarityGraph:
    """Symmetric sentence-similarity graph with non-negative weights."""

    n: int
    weights: np.ndarray  # shape (n, n), zero diagonal
    kind: str  # cosine_threshold | cosine_continuous | textrank_overlap


def cosine_threshold_graph(
    matrix: TermSentenceMatrix, threshold: float = 0.1
) -> SimilarityGraph:
    """Binary graph: edge of weight 1 wherever cosine exceeds the threshold."""
    sims = cosine_matrix(matrix)
    edges = (sims > threshold).astype(float)
    return SimilarityGraph(edges.shape[0], edges, "cosine_threshold")


def cosine_graph(matrix: TermSentenceMatrix) -> SimilarityGraph:
    """Continuous graph weighted by the raw cosine values."""
    sims = cosine_matrix(matrix)
    return SimilarityGraph(sims.shape[0], sims, "cosine_continuous")


def overlap_graph(token_lists: Sequence[Sequence[str]]) -> SimilarityGraph:
    """Word-overlap graph: |shared words| / (ln|i| + ln|j|).

    Sentence size is its content-token count; pairs where either side
    has at most one token get weight zero.
    """
    n = len(token_lists)
    sets = [set(toks) for toks in token_lists]
    lengths = [len(toks) for toks in token_lists]
    weights = np.zeros((n, n))
    for i in range(n):
        if lengths[i] <= 1:
            continue
        for j in range(i + 1, n):
            if lengths[j] <= 1:
                continue
            shared = len(sets[i] & sets[j])
            if shared:
                w = shared / (math.log(lengths[i]) + math.log(lengths[j]))
                weights[i, j] = weights[j, i] = w
    return SimilarityGraph(n, weights, "textrank_overlap")


def power_iteration(
    graph: SimilarityGraph,
    damping: float = 0.85,
    eps: float = 1e-8,
    max_iter: int = 200,
) -> np.ndarray:
    """Damped PageRank-style iteration over the similarity graph.

    Solves p = (1-d)/n + d * M^T p where M is the row-stochastic
    normalization of the edge weights (all-zero rows become uniform).
    Stops when the L1 change drops below eps; the result sums to 1.
    """
    if graph.n < 1:
        raise EmptyInput("graph has no nodes")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    n = graph.n
    row_sums = graph.weights.sum(axis=1)
    m = np.where(
        row_sums[:, None] > 0, graph.weights / np.maximum(row_sums, 1e-300)[:, None],
        1.0 / n,
    )
    p = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        p_next = teleport + damping * (m.T @ p)
        if np.abs(p_next - p).sum() < eps:
            return p_next
        p = p_next
    raise NoConvergence(max_iter, p)
