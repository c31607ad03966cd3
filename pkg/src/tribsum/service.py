"""HTTP service for the blind-review workflow.

Serves the next pending task, accepts rating submissions and exposes
live aggregates to admins. Authentication is static bearer tokens from
a config file; this is a review workbench, not a public service. No
reviewer-facing response ever carries a method identifier.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .corpus import Decision
from .evaluation import (
    DuplicateRating,
    MissingCriterion,
    RatingStore,
    ReviewTask,
    ScoreOutOfRange,
    UnknownTask,
    aggregate,
    format_cell,
)


class RatingBody(BaseModel):
    task_id: str
    scores: dict[str, int]
    comment: str | None = None


def load_tokens(path: str | Path) -> dict[str, dict]:
    """Token file: {token: {"reviewer_id": ..., "role": "reviewer"|"admin"}}."""
    return json.loads(Path(path).read_text("utf-8"))


def create_app(
    decisions: dict[str, Decision],
    tasks: list[ReviewTask],
    store: RatingStore,
    tokens: dict[str, dict],
) -> FastAPI:
    app = FastAPI(title="review-service")
    # credentialed requests: the wildcard neither covers Authorization
    # nor is it accepted as an origin by browsers
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=".*",
        allow_credentials=True,
        allow_methods=["GET", "POST"],
        allow_headers=["Authorization", "Content-Type"],
    )

    tasks_by_id = {task.task_id: task for task in tasks}
    tasks_by_reviewer: dict[str, list[ReviewTask]] = {}
    for task in tasks:
        tasks_by_reviewer.setdefault(task.reviewer_id, []).append(task)

    def principal(request: Request) -> dict:
        header = request.headers.get("authorization", "")
        if header.lower().startswith("bearer "):
            token = header[7:].strip()
            if token in tokens:
                return tokens[token]
        raise HTTPException(status_code=401, detail="missing or invalid token")

    def remaining_for(reviewer_id: str) -> int:
        assigned = tasks_by_reviewer.get(reviewer_id, [])
        return sum(1 for t in assigned if not store.has_rating(t.task_id))

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/tasks/next")
    def next_task(
        request: Request,
        include_source: bool = False,
        who: dict = Depends(principal),
    ):
        assigned = tasks_by_reviewer.get(who.get("reviewer_id", ""), [])
        for task in assigned:
            if store.has_rating(task.task_id):
                continue
            body = task.reviewer_payload()
            body["remaining"] = remaining_for(task.reviewer_id)
            if include_source:
                decision = decisions.get(task.decision_id)
                body["source_text"] = (
                    decision.section(task.section) if decision else ""
                )
            return body
        return Response(status_code=204)

    @app.post("/api/ratings", status_code=201)
    def submit_rating(body: RatingBody, who: dict = Depends(principal)):
        task = tasks_by_id.get(body.task_id)
        if task is None:
            raise HTTPException(status_code=404, detail="unknown task")
        if task.reviewer_id != who.get("reviewer_id"):
            raise HTTPException(status_code=403, detail="not your task")
        try:
            store.record(body.task_id, body.scores, body.comment)
        except (ScoreOutOfRange, MissingCriterion) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except UnknownTask as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except DuplicateRating as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {"remaining": remaining_for(task.reviewer_id)}

    @app.get("/api/aggregate")
    def live_aggregate(who: dict = Depends(principal)):
        if who.get("role") != "admin":
            raise HTTPException(status_code=403, detail="admin role required")
        rows = aggregate(store.ratings, tasks)
        return {
            "rows": [
                {
                    "method": row.method,
                    "criterion": row.criterion.value,
                    "n": row.n,
                    "mean": row.mean,
                    "std": row.std,
                    "cell": format_cell(row.mean, row.std),
                }
                for row in rows
            ]
        }

    @app.get("/api/decisions/{decision_id}")
    def decision_text(decision_id: str, who: dict = Depends(principal)):
        decision = decisions.get(decision_id)
        if decision is None:
            raise HTTPException(status_code=404, detail="unknown decision")
        return {
            "id": decision.id,
            "sections": {k.value: v for k, v in decision.sections.items()},
        }

    return app
