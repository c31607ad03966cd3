"""Blind human-evaluation protocol and automatic metrics."""

from .protocol import (
    BLIND_LABELS,
    CRITERIA,
    AggregateRow,
    Criterion,
    DuplicateRating,
    EmptyRound,
    GatePolicy,
    InsufficientCoverage,
    MissingCriterion,
    Rating,
    RatingStore,
    ReviewTask,
    ScoreOutOfRange,
    UnknownTask,
    aggregate,
    assign_tasks,
    format_cell,
    gate_round,
    render_table,
    validate_scores,
)
from .rouge import rouge_l, rouge_n

__all__ = [
    "BLIND_LABELS",
    "CRITERIA",
    "AggregateRow",
    "Criterion",
    "DuplicateRating",
    "EmptyRound",
    "GatePolicy",
    "InsufficientCoverage",
    "MissingCriterion",
    "Rating",
    "RatingStore",
    "ReviewTask",
    "ScoreOutOfRange",
    "UnknownTask",
    "aggregate",
    "assign_tasks",
    "format_cell",
    "gate_round",
    "render_table",
    "validate_scores",
    "rouge_l",
    "rouge_n",
]
