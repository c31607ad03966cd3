"""Extractive summarization: shared kernels plus five classical scorers."""

from .kernels import (
    EmptyInput,
    NoConvergence,
    SimilarityGraph,
    TermSentenceMatrix,
    build_matrix,
    content_tokens,
    cosine,
    cosine_graph,
    cosine_matrix,
    cosine_threshold_graph,
    overlap_graph,
    power_iteration,
)
from .summarizers import (
    CLASSICAL_SCORERS,
    FreqScorer,
    LexRankScorer,
    LsaScorer,
    LuhnScorer,
    ScoredExtract,
    SentenceScorer,
    TextRankScorer,
    best_cluster_score,
    check_sentences,
    luhn_cluster_score,
    make_scorer,
    select_top_k,
    significant_words,
    top_k_indices,
)

__all__ = [
    "EmptyInput",
    "NoConvergence",
    "SimilarityGraph",
    "TermSentenceMatrix",
    "build_matrix",
    "content_tokens",
    "cosine",
    "cosine_graph",
    "cosine_matrix",
    "cosine_threshold_graph",
    "overlap_graph",
    "power_iteration",
    "CLASSICAL_SCORERS",
    "FreqScorer",
    "LexRankScorer",
    "LsaScorer",
    "LuhnScorer",
    "ScoredExtract",
    "SentenceScorer",
    "TextRankScorer",
    "best_cluster_score",
    "check_sentences",
    "luhn_cluster_score",
    "make_scorer",
    "select_top_k",
    "significant_words",
    "top_k_indices",
]
