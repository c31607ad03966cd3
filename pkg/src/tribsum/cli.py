"""Command-line entry point: ingest, summarize, verify, eval, rouge, serve.

Values come from an optional JSON config file with flag overrides
(flags win). Outputs are files; logs go to standard error. Exit codes:
0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from .corpus import (
    Decision,
    HeaderPatterns,
    load_corpus,
    parse_decision,
    save_corpus,
    split_sentences,
)
from .errors import TribsumError
from .evaluation import (
    GatePolicy,
    Rating,
    RatingStore,
    ReviewTask,
    aggregate,
    assign_tasks,
    gate_round,
    render_table,
    rouge_l,
    rouge_n,
)
from .methods import CLASSICAL_METHOD_IDS, KNOWN_METHODS
from .structured import (
    StructureConfig,
    Violation,
    extract_from_payload,
    issues_from_payload,
    validate_structure,
    verify_grounding,
)

logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
logger = logging.getLogger("tribsum")



class RunConfig:
    """JSON config with method-id validation; flags override its values."""

    def __init__(self, data: dict | None = None):
        self.data = data or {}
        for method in self.data.get("methods", {}):
            if method not in KNOWN_METHODS:
                raise TribsumError(f"unknown method id in config: {method!r}")

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        if not path:
            return cls()
        return cls(json.loads(Path(path).read_text("utf-8")))

    def get(self, *keys, default=None):
        node = self.data
        for key in keys:
            if not isinstance(node, dict) or key not in node:
                return default
            node = node[key]
        return node


def _write_jsonl(path: str | Path, records) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def _read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file; flags override its values.")
@click.pass_context
def main(ctx, config_path):
    """Summarization and blind-review toolkit for tax-court decisions."""
    try:
        ctx.obj = RunConfig.load(config_path)
    except TribsumError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--patterns", "patterns_path", type=click.Path(exists=True), default=None)
def ingest(in_dir, out_path, patterns_path):
    """Parse raw decision text files into a corpus file."""
    patterns = HeaderPatterns.from_file(patterns_path) if patterns_path else None
    decisions = []
    for path in sorted(Path(in_dir).glob("*.txt")):
        raw = path.read_text("utf-8")
        try:
            decisions.append(
                parse_decision(raw, patterns, decision_id=path.stem)
            )
        except TribsumError as exc:
            raise click.ClickException(f"{path.name}: {exc}") from exc
    save_corpus(decisions, out_path)
    logger.info("ingested %d decisions -> %s", len(decisions), out_path)


def _summary_record(decision_id, section, method, kind, payload):
    return {
        "summary_id": f"{decision_id}:{section}:{method}",
        "decision_id": decision_id,
        "section": section,
        "method": method,
        "kind": kind,
        "payload": payload,
    }


def _summarize_classical(decisions, method, section, k, cfg, workers):
    from .extractive import make_scorer

    params = dict(cfg.get("methods", method, default={}) or {})
    params["k"] = k

    def one(decision: Decision):
        text = decision.section(section)
        if not text.strip():
            return None
        sentences = split_sentences(text)
        scorer = make_scorer(method, **params)
        extract = scorer.extract([s.text for s in sentences],
                                 source=(decision.id, section))
        payload = {
            "k": extract.k,
            "items": [
                {"position": idx, "text": sentences[idx].text, "score": score}
                for idx, score in extract.items
            ],
        }
        return _summary_record(decision.id, section, method, "extractive", payload)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(one, decisions))
    return [r for r in results if r is not None]


def _summarize_llm(decisions, method, section, k, cfg, *,
                   model, fixtures, live, record, lang):
    from .llm import LiveTransport, LlmClient, ReplayTransport, summarize_section

    if live:
        base_url = cfg.get("llm", "base_url",
                           default=os.environ.get("LLM_BASE_URL", ""))
        if not base_url:
            raise click.ClickException("--live requires llm.base_url or LLM_BASE_URL")
        credential_env = cfg.get("llm", "credential_env", default="LLM_API_KEY")
        transport = LiveTransport(base_url, credential_env)
    else:
        if not fixtures:
            raise click.ClickException(
                "offline runs need --fixtures (or --live for network calls)"
            )
        transport = ReplayTransport(fixtures)
    client = LlmClient(transport, record_path=record)
    records = []
    for decision in decisions:
        text = decision.section(section)
        if not text.strip():
            continue
        payload = summarize_section(
            client, method, text, model=model, k=k, language=lang
        )
        kind = payload.pop("kind")
        records.append(_summary_record(decision.id, section, method, kind, payload))
    return records


@main.command()
@click.option("--method", required=True, type=click.Choice(KNOWN_METHODS))
@click.option("--section", default="grounds",
              type=click.Choice(["development", "grounds"]))
@click.option("--k", default=None, type=int)
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--model", default=None)
@click.option("--fixtures", type=click.Path(exists=True), default=None,
              help="Replay fixture file for offline LLM calls.")
@click.option("--live", is_flag=True, help="Allow live LLM calls.")
@click.option("--record", type=click.Path(), default=None,
              help="Append live results to this replay fixture file.")
@click.option("--lang", default=None, type=click.Choice(["it", "en"]))
@click.option("--workers", default=None, type=int)
@click.pass_obj
def summarize(cfg, method, section, k, in_path, out_path, model, fixtures,
              live, record, lang, workers):
    """Summarize one section of every corpus decision with one method."""
    decisions = load_corpus(in_path)
    k = k if k is not None else cfg.get("methods", method, "k", default=5)
    workers = workers or cfg.get("workers", default=os.cpu_count() or 1)
    try:
        if method in CLASSICAL_METHOD_IDS:
            records = _summarize_classical(decisions, method, section, k, cfg, workers)
        else:
            model = model or cfg.get("llm", "model", default="gpt-4")
            lang = lang or cfg.get("llm", "language", default="it")
            fixtures = fixtures or cfg.get("llm", "fixtures", default=None)
            records = _summarize_llm(
                decisions, method, section, k, cfg,
                model=model, fixtures=fixtures, live=live, record=record, lang=lang,
            )
    except TribsumError as exc:
        raise click.ClickException(str(exc)) from exc
    _write_jsonl(out_path, records)
    logger.info("%s: %d summaries -> %s", method, len(records), out_path)


@main.command()
@click.option("--summary", "summary_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default=None)
def verify(summary_path, corpus_path, out_path):
    """Ground summaries against their sources; non-zero exit on errors."""
    decisions = {d.id: d for d in load_corpus(corpus_path)}
    failed = False
    reports = []
    for record in _read_jsonl(summary_path):
        decision = decisions.get(record["decision_id"])
        if decision is None:
            raise click.ClickException(
                f"summary references unknown decision {record['decision_id']!r}"
            )
        source = decision.section(record["section"])
        violations: list[Violation] = []
        report = None
        if record["kind"] == "extractive":
            report = verify_grounding(extract_from_payload(record["payload"]), source)
            violations = list(report.violations)
        elif record["kind"] == "issues":
            summary = issues_from_payload(record["payload"])
            report = verify_grounding(summary, source)
            violations = list(report.violations)
            violations += validate_structure(summary, StructureConfig())
            violations += [
                Violation(f["kind"], f["detail"], f.get("severity", "warning"))
                for f in record["payload"].get("findings", [])
            ]
        out = dict(record)
        if report is not None:
            out["grounding_report"] = report.to_record()
            if not report.all_grounded:
                failed = True
        out["violations"] = [
            {"kind": v.kind, "detail": v.detail, "severity": v.severity}
            for v in violations
        ]
        if any(v.severity == "error" for v in violations):
            failed = True
        reports.append(out)
    if out_path:
        _write_jsonl(out_path, reports)
    ungrounded = sum(
        1
        for r in reports
        for v in r.get("grounding_report", {}).get("verdicts", [])
        if v["verdict"] == "ungrounded"
    )
    logger.info(
        "verified %d summaries: %d ungrounded spans", len(reports), ungrounded
    )
    if failed:
        raise click.ClickException("verification failed")


@main.group(name="eval")
def eval_group():
    """Blind-evaluation protocol commands."""


@eval_group.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--summaries", "summary_paths", required=True, multiple=True,
              type=click.Path(exists=True))
@click.option("--reviewers", default=8, type=int)
@click.option("--per-reviewer", "per_reviewer", default=5, type=int)
@click.option("--seed", default=None, type=int)
@click.option("--round", "round_no", default=1, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_obj
def assign(cfg, corpus_path, summary_paths, reviewers, per_reviewer, seed,
           round_no, out_path):
    """Create blind review tasks from summaries of every method."""
    decisions = [d.id for d in load_corpus(corpus_path)]
    by_method: dict[str, dict[str, dict]] = {}
    for path in summary_paths:
        for record in _read_jsonl(path):
            by_method.setdefault(record["method"], {})[record["decision_id"]] = record
    reviewer_ids = [f"rev{i:02d}" for i in range(1, reviewers + 1)]
    seed = seed if seed is not None else cfg.get("seed", default=0)
    try:
        tasks = assign_tasks(
            decisions, by_method, reviewer_ids, per_reviewer,
            seed=seed, round_no=round_no,
        )
    except (TribsumError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    _write_jsonl(out_path, (t.to_record() for t in tasks))
    logger.info("assigned %d tasks -> %s", len(tasks), out_path)


def _load_tasks(path) -> list[ReviewTask]:
    return [ReviewTask.from_record(r) for r in _read_jsonl(path)]


def _load_ratings(path) -> list[Rating]:
    return [
        Rating(
            task_id=r["task_id"],
            reviewer_id=r.get("reviewer_id", ""),
            scores=r["scores"],
            comment=r.get("comment"),
            ts=r.get("ts", ""),
        )
        for r in _read_jsonl(path)
    ]


@eval_group.command()
@click.option("--ratings", "ratings_path", required=True, type=click.Path(exists=True))
@click.option("--tasks", "tasks_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--csv", "csv_path", type=click.Path(), default=None)
def report(ratings_path, tasks_path, out_path, csv_path):
    """Render the mean/(std) table across methods and criteria."""
    rows = aggregate(_load_ratings(ratings_path), _load_tasks(tasks_path))
    Path(out_path).write_text(render_table(rows, "text"), encoding="utf-8")
    if csv_path:
        Path(csv_path).write_text(render_table(rows, "csv"), encoding="utf-8")
    logger.info("aggregate over %d cells -> %s", len(rows), out_path)


@eval_group.command()
@click.option("--ratings", "ratings_path", required=True, type=click.Path(exists=True))
@click.option("--tasks", "tasks_path", required=True, type=click.Path(exists=True))
@click.option("--top-n", default=2, type=int)
@click.option("--pin", "pinned", multiple=True)
@click.option("--min-mean", default=None, type=float)
def gate(ratings_path, tasks_path, top_n, pinned, min_mean):
    """Pick the methods that advance to the next round."""
    rows = aggregate(_load_ratings(ratings_path), _load_tasks(tasks_path))
    try:
        kept = gate_round(
            rows, GatePolicy(top_n=top_n, pinned=frozenset(pinned), min_mean=min_mean)
        )
    except TribsumError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo("\n".join(kept))


@main.command()
@click.option("--candidate", "candidate_path", required=True,
              type=click.Path(exists=True))
@click.option("--reference", "reference_path", required=True,
              type=click.Path(exists=True))
@click.option("--n", default=1, type=int)
@click.option("--lcs", is_flag=True, help="Compute ROUGE-L instead of ROUGE-N.")
def rouge(candidate_path, reference_path, n, lcs):
    """ROUGE-N / ROUGE-L between two text files."""
    candidate = Path(candidate_path).read_text("utf-8")
    reference = Path(reference_path).read_text("utf-8")
    if lcs:
        precision, recall, f1 = rouge_l(candidate, reference)
        label = "rouge-l"
    else:
        precision, recall, f1 = rouge_n(candidate, reference, n)
        label = f"rouge-{n}"
    click.echo(json.dumps(
        {"metric": label, "precision": precision, "recall": recall, "f1": f1}
    ))


@main.command()
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--tasks", "tasks_path", required=True, type=click.Path(exists=True))
@click.option("--ratings", "ratings_path", required=True, type=click.Path())
@click.option("--tokens", "tokens_path", required=True, type=click.Path(exists=True))
def serve(port, host, corpus_path, tasks_path, ratings_path, tokens_path):
    """Run the blind-review HTTP service."""
    import uvicorn

    from .service import create_app, load_tokens

    decisions = {d.id: d for d in load_corpus(corpus_path)}
    tasks = _load_tasks(tasks_path)
    store = RatingStore(ratings_path, tasks)
    app = create_app(decisions, tasks, store, load_tokens(tokens_path))
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
