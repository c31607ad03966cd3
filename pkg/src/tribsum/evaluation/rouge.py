"""ROUGE-N and ROUGE-L over the shared token stream.

N-gram overlap is clipped (multiset intersection); ROUGE-L reuses the
same LCS dynamic program as the grounding verifier. All three values of
each triple are zero when there is nothing to compare.
"""

from __future__ import annotations

from collections import Counter

from ..text import lcs_length, tokenize


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def rouge_n(candidate: str, reference: str, n: int = 1) -> tuple[float, float, float]:
    """Clipped n-gram precision, recall and F1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = tokenize(candidate)
    ref = tokenize(reference)
    cand_grams = Counter(tuple(cand[i : i + n]) for i in range(len(cand) - n + 1))
    ref_grams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
    overlap = sum((cand_grams & ref_grams).values())
    total_cand = sum(cand_grams.values())
    total_ref = sum(ref_grams.values())
    precision = overlap / total_cand if total_cand else 0.0
    recall = overlap / total_ref if total_ref else 0.0
    return precision, recall, _f1(precision, recall)


def rouge_l(candidate: str, reference: str) -> tuple[float, float, float]:
    """LCS-based precision, recall and F1 over token streams."""
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return 0.0, 0.0, 0.0
    lcs = lcs_length(cand, ref)
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    return precision, recall, _f1(precision, recall)
