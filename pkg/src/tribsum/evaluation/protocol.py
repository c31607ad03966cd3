"""Blind expert-review protocol: assignment, rating storage, aggregation.

Reviewers rate summaries on four criteria with integer scores from 1 to
5. Task assignment is seeded and blind (labels are per-group random
permutations that carry no method information); ratings live in an
append-only line-delimited store keyed by task id; aggregation reports
per-method per-criterion mean and population standard deviation in the
"m.mm (s.ss)" table style.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..errors import TribsumError


class Criterion(str, Enum):
    SATISFACTION = "satisfaction"
    CORRECTNESS = "correctness"
    FORM = "form"
    COMPLETENESS = "completeness"


# Questionnaire order; table renderers keep this row order.
CRITERIA = (
    Criterion.SATISFACTION,
    Criterion.CORRECTNESS,
    Criterion.FORM,
    Criterion.COMPLETENESS,
)

BLIND_LABELS = tuple(f"Summary {chr(ord('A') + i)}" for i in range(26))


class InsufficientCoverage(TribsumError):
    def __init__(self, decision_id: str, method: str):
        self.decision_id = decision_id
        self.method = method
        super().__init__(
            f"decision {decision_id!r} has no summary for method {method!r}"
        )


class UnknownTask(TribsumError):
    pass


class DuplicateRating(TribsumError):
    pass


class ScoreOutOfRange(TribsumError):
    pass


class MissingCriterion(TribsumError):
    pass


class EmptyRound(TribsumError):
    pass


@dataclass
class ReviewTask:
    """One blind rating assignment.

    The method id is kept for aggregation but never enters the payload
    served to a reviewer; `reviewer_payload` is the only reviewer-facing
    serialization.
    """

    task_id: str
    reviewer_id: str
    decision_id: str
    summary_id: str
    blind_label: str
    round: int
    method: str
    kind: str
    section: str
    payload: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "task_id": self.task_id,
            "reviewer_id": self.reviewer_id,
            "decision_id": self.decision_id,
            "summary_id": self.summary_id,
            "blind_label": self.blind_label,
            "round": self.round,
            "method": self.method,
            "kind": self.kind,
            "section": self.section,
            "payload": self.payload,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ReviewTask":
        return cls(**record)

    def reviewer_payload(self) -> dict:
        """Blind, reviewer-facing view of this task."""
        return {
            "task_id": self.task_id,
            "blind_label": self.blind_label,
            "round": self.round,
            "kind": self.kind,
            "summary": self.payload,
        }


@dataclass
class Rating:
    task_id: str
    reviewer_id: str
    scores: dict[str, int]
    comment: str | None = None
    ts: str = ""

    def to_record(self) -> dict:
        return {
            "task_id": self.task_id,
            "reviewer_id": self.reviewer_id,
            "scores": self.scores,
            "comment": self.comment,
            "ts": self.ts,
        }


@dataclass(frozen=True)
class AggregateRow:
    method: str
    criterion: Criterion
    n: int
    mean: float
    std: float


def assign_tasks(
    decisions: Sequence[str],
    summaries_by_method: Mapping[str, Mapping[str, dict]],
    reviewers: Sequence[str],
    per_reviewer_decisions: int = 5,
    *,
    seed: int = 0,
    round_no: int = 1,
) -> list[ReviewTask]:
    """Assign blind rating tasks: per reviewer, a seeded sample of
    decisions, each paired with every method's summary under a per-group
    random blind label; presentation order is shuffled per reviewer."""
    methods = sorted(summaries_by_method)
    if not methods or not decisions or not reviewers:
        raise ValueError("decisions, methods and reviewers must be non-empty")
    if per_reviewer_decisions > len(decisions):
        raise ValueError(
            f"cannot sample {per_reviewer_decisions} decisions from a pool of "
            f"{len(decisions)}"
        )
    for decision_id in decisions:
        for method in methods:
            if decision_id not in summaries_by_method[method]:
                raise InsufficientCoverage(decision_id, method)

    rng = random.Random(seed)
    tasks: list[ReviewTask] = []
    for reviewer in reviewers:
        chosen = rng.sample(list(decisions), per_reviewer_decisions)
        reviewer_tasks: list[ReviewTask] = []
        for decision_id in chosen:
            labels = list(BLIND_LABELS[: len(methods)])
            rng.shuffle(labels)
            for method, label in zip(methods, labels):
                summary = summaries_by_method[method][decision_id]
                reviewer_tasks.append(
                    ReviewTask(
                        task_id="",
                        reviewer_id=reviewer,
                        decision_id=decision_id,
                        summary_id=summary.get("summary_id", ""),
                        blind_label=label,
                        round=round_no,
                        method=method,
                        kind=summary.get("kind", ""),
                        section=summary.get("section", ""),
                        payload=summary.get("payload", {}),
                    )
                )
        rng.shuffle(reviewer_tasks)
        for seq, task in enumerate(reviewer_tasks, start=1):
            task.task_id = f"r{round_no}-{reviewer}-{seq:03d}"
        tasks.extend(reviewer_tasks)
    return tasks


def validate_scores(scores: Mapping[str, object]) -> dict[str, int]:
    """Check all four criteria are present with integer scores in 1..5."""
    clean: dict[str, int] = {}
    for criterion in CRITERIA:
        if criterion.value not in scores:
            raise MissingCriterion(f"missing score for {criterion.value}")
        value = scores[criterion.value]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScoreOutOfRange(
                f"score for {criterion.value} must be an integer in [1, 5]"
            )
        if not 1 <= value <= 5:
            raise ScoreOutOfRange(
                f"score {value} for {criterion.value} outside [1, 5]"
            )
        clean[criterion.value] = value
    unknown = set(scores) - {c.value for c in CRITERIA}
    if unknown:
        raise ScoreOutOfRange(f"unknown criteria: {sorted(unknown)}")
    return clean


class RatingStore:
    """Append-only rating log with duplicate protection by task id.

    Appends are serialized through a lock (single-writer contract);
    reads see the in-memory index, which is rebuilt from the file on
    startup, so a restart loses nothing.
    """

    def __init__(self, path: str | Path, tasks: Iterable[ReviewTask] = ()):
        self.path = Path(path)
        self._tasks = {task.task_id: task for task in tasks}
        self._ratings: dict[str, Rating] = {}
        self._lock = threading.Lock()
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        record = json.loads(line)
                        rating = Rating(
                            task_id=record["task_id"],
                            reviewer_id=record.get("reviewer_id", ""),
                            scores=record["scores"],
                            comment=record.get("comment"),
                            ts=record.get("ts", ""),
                        )
                        self._ratings[rating.task_id] = rating

    @property
    def ratings(self) -> list[Rating]:
        return list(self._ratings.values())

    def has_rating(self, task_id: str) -> bool:
        return task_id in self._ratings

    def record(
        self, task_id: str, scores: Mapping[str, object], comment: str | None = None
    ) -> Rating:
        with self._lock:
            task = self._tasks.get(task_id)
            if task is None:
                raise UnknownTask(f"unknown task {task_id!r}")
            if task_id in self._ratings:
                raise DuplicateRating(f"task {task_id!r} already rated")
            rating = Rating(
                task_id=task_id,
                reviewer_id=task.reviewer_id,
                scores=validate_scores(scores),
                comment=comment,
                ts=datetime.now(timezone.utc).isoformat(),
            )
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(rating.to_record(), ensure_ascii=False) + "\n")
            self._ratings[task_id] = rating
            return rating


def aggregate(
    ratings: Iterable[Rating], tasks: Iterable[ReviewTask]
) -> list[AggregateRow]:
    """Per-(method, criterion) mean and population standard deviation."""
    method_of = {task.task_id: task.method for task in tasks}
    buckets: dict[tuple[str, Criterion], list[int]] = {}
    for rating in ratings:
        method = method_of.get(rating.task_id)
        if method is None:
            continue
        for criterion in CRITERIA:
            value = rating.scores.get(criterion.value)
            if value is not None:
                buckets.setdefault((method, criterion), []).append(value)
    rows = []
    for method in sorted({m for m, _ in buckets}):
        for criterion in CRITERIA:
            values = buckets.get((method, criterion))
            if not values:
                continue
            mean = sum(values) / len(values)
            variance = sum((v - mean) ** 2 for v in values) / len(values)
            rows.append(
                AggregateRow(method, criterion, len(values), mean, math.sqrt(variance))
            )
    return rows


def _round2(value: float) -> str:
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def format_cell(mean: float, std: float) -> str:
    """Render one table cell as "m.mm (s.ss)" with half-up rounding."""
    return f"{_round2(mean)} ({_round2(std)})"


def render_table(rows: Sequence[AggregateRow], fmt: str = "text") -> str:
    """Criteria-by-method table with an explicit rating count per method."""
    methods = sorted({row.method for row in rows})
    by_key = {(row.method, row.criterion): row for row in rows}
    n_by_method = {
        method: max(
            (by_key[(method, c)].n for c in CRITERIA if (method, c) in by_key),
            default=0,
        )
        for method in methods
    }
    header = [""] + methods
    n_line = ["n"] + [str(n_by_method[m]) for m in methods]
    body = []
    for criterion in CRITERIA:
        line = [criterion.value.capitalize()]
        for method in methods:
            row = by_key.get((method, criterion))
            line.append(format_cell(row.mean, row.std) if row else "-")
        body.append(line)

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        for line in body:
            writer.writerow(line)
        writer.writerow(n_line)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    table = [header] + body + [n_line]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for row in table:
        lines.append(
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GatePolicy:
    """Which methods advance to the next evaluation round."""

    top_n: int = 2
    pinned: frozenset[str] = frozenset()
    min_mean: float | None = None


def gate_round(
    aggregates: Sequence[AggregateRow], policy: GatePolicy | None = None
) -> list[str]:
    """Keep the top methods by mean satisfaction plus pinned baselines."""
    policy = policy or GatePolicy()
    satisfaction = [
        row for row in aggregates if row.criterion is Criterion.SATISFACTION
    ]
    if not satisfaction:
        raise EmptyRound("no satisfaction aggregates for this round")
    ranked = sorted(satisfaction, key=lambda row: (-row.mean, row.method))
    winners = [row.method for row in ranked[: policy.top_n]]
    if policy.min_mean is not None:
        means = {row.method: row.mean for row in ranked}
        winners = [m for m in winners if means[m] >= policy.min_mean]
    kept = list(winners)
    for method in sorted(policy.pinned):
        if method not in kept:
            kept.append(method)
    return kept
