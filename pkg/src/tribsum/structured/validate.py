"""Structural checks on issue summaries.

The prompt constrains the output shape (few issues, at most three BTs,
no concrete-case references in QD/PD, distinct PDs); violations are
data, not exceptions, so imperfect outputs remain evaluable. BT
overflow and case-reference leaks are errors, the rest are warnings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from ..text import normalize, tokenize
from .parsers import IssueSummary, Violation

# Anonymized fixtures mark parties and places with tokens like
# "respondent_1" or "place_2"; QD/PD must stay case-generic.
DEFAULT_PLACEHOLDER_PATTERN = r"\b[A-Za-z]+_\d+\b"


@dataclass(frozen=True)
class StructureConfig:
    max_issues: int = 4
    max_bts: int = 3
    placeholder_pattern: str = DEFAULT_PLACEHOLDER_PATTERN
    pd_jaccard_threshold: float = 0.8


def validate_structure(
    summary: IssueSummary, config: StructureConfig | None = None
) -> list[Violation]:
    """Emit findings for shape violations; returns data, never raises."""
    config = config or StructureConfig()
    findings: list[Violation] = []

    if len(summary.issues) > config.max_issues:
        findings.append(
            Violation(
                "TooManyIssues",
                f"{len(summary.issues)} issues exceed the soft maximum "
                f"of {config.max_issues}",
                severity="warning",
            )
        )

    for issue in summary.issues:
        if len(issue.bts) > config.max_bts:
            findings.append(
                Violation(
                    "BtOverflow",
                    f"issue {issue.index} has {len(issue.bts)} BTs "
                    f"(maximum {config.max_bts})",
                    severity="error",
                )
            )

    placeholder = re.compile(config.placeholder_pattern)
    for issue in summary.issues:
        for label, text in (("QD", issue.qd), ("PD", issue.pd)):
            hit = placeholder.search(text)
            if hit:
                findings.append(
                    Violation(
                        "CaseReferenceLeak",
                        f"{label}{issue.index} contains case reference "
                        f"{hit.group()!r}",
                        severity="error",
                    )
                )

    pds = [(issue.index, issue.pd) for issue in summary.issues if issue.pd]
    for (idx_a, pd_a), (idx_b, pd_b) in combinations(pds, 2):
        similarity = _jaccard(pd_a, pd_b)
        if similarity > config.pd_jaccard_threshold:
            findings.append(
                Violation(
                    "NearDuplicatePds",
                    f"PD{idx_a} and PD{idx_b} token overlap "
                    f"{similarity:.2f} exceeds {config.pd_jaccard_threshold}",
                    severity="warning",
                )
            )
    return findings


def _jaccard(a: str, b: str) -> float:
    set_a = set(tokenize(normalize(a)))
    set_b = set(tokenize(normalize(b)))
    if not set_a and not set_b:
        return 0.0
    return len(set_a & set_b) / len(set_a | set_b)
