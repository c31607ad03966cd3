"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with `pytest tests/test_acceptance.py -v -s` to get one line per
criterion (pytest's PASSED/FAILED plus an explicit ACCEPTANCE line).
"""

from __future__ import annotations

import json
import random
import re
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from tribsum.evaluation import aggregate, assign_tasks, format_cell
from tribsum.evaluation.protocol import CRITERIA, Rating
from tribsum.extractive import (
    CLASSICAL_SCORERS,
    LsaScorer,
    SimilarityGraph,
    best_cluster_score,
    power_iteration,
)
from tribsum.evaluation import rouge_l, rouge_n
from tribsum.llm import load_template, render_prompt
from tribsum.structured import (
    Issue,
    IssueSummary,
    Verdict,
    parse_issue_summary,
    parse_llm_extract,
    verify_grounding,
)

REPO = Path(__file__).resolve().parent.parent
DATA = Path(__file__).resolve().parent / "data"
FIXTURES = REPO / "fixtures"
NO_STOPWORDS = frozenset()


def _ok(name: str) -> None:
    print(f"\nACCEPTANCE PASS: {name}")


def _pagerank_oracle(weights: np.ndarray, damping: float = 0.85) -> np.ndarray:
    n = weights.shape[0]
    m = np.empty_like(weights, dtype=float)
    for i in range(n):
        row_sum = weights[i].sum()
        m[i] = weights[i] / row_sum if row_sum > 0 else 1.0 / n
    return np.linalg.solve(
        np.eye(n) - damping * m.T, np.full(n, (1.0 - damping) / n)
    )


def test_power_iteration_oracle_200_graphs():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    for _ in range(200):
        n = int(rng.integers(1, 7))
        weights = rng.random((n, n))
        weights = (weights + weights.T) / 2
        weights *= rng.random((n, n)) < 0.7  # sparsify
        weights = np.triu(weights, 1) + np.triu(weights, 1).T
        if rng.random() < 0.3 and n > 1:
            weights[0, :] = 0.0
            weights[:, 0] = 0.0  # dangling node
        scores = power_iteration(SimilarityGraph(n, weights, "x"))
        oracle = _pagerank_oracle(weights)
        assert np.abs(scores - oracle).max() < 1e-6
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _ok(f"power-iteration oracle, 200 graphs, {elapsed:.2f}s")


def _random_corpus(rng: random.Random) -> tuple[list[str], int, int]:
    vocab = ["tax", "relief", "court", "costs", "appeal", "deed",
             "dwelling", "notice", "office", "judge"]
    n = rng.randint(3, 10)
    sentences = [
        " ".join(rng.choices(vocab, k=rng.randint(2, 7))) for _ in range(n)
    ]
    a, b = rng.sample(range(n), 2)
    sentences[b] = sentences[a]
    return sentences, a, b


def test_extractive_symmetry_suite():
    rng = random.Random(7)
    for trial in range(100):
        sentences, a, b = _random_corpus(rng)
        n = len(sentences)
        perm = list(range(n))
        rng.shuffle(perm)
        permuted = [sentences[p] for p in perm]
        for method, cls in CLASSICAL_SCORERS.items():
            scorer = cls(k=n, stopwords=NO_STOPWORDS)
            scores = scorer.transform(sentences)
            assert scores[a] == pytest.approx(scores[b], abs=1e-8), (
                f"{method} trial {trial}: duplicates scored differently"
            )
            permuted_scores = cls(k=n, stopwords=NO_STOPWORDS).transform(permuted)
            for j in range(n):
                assert permuted_scores[j] == pytest.approx(
                    scores[perm[j]], abs=1e-8
                ), f"{method} trial {trial}: not permutation-equivariant"
    _ok("extractive symmetry suite, 5 methods x 100 corpora")


def test_lsa_topic_separation():
    rng = random.Random(41)
    done = 0
    while done < 50:
        size_a = rng.randint(2, 4)
        size_b = rng.randint(2, 4)
        base_a = " ".join(f"alpha{i}" for i in range(rng.randint(2, 4)))
        base_b = " ".join(f"beta{i}" for i in range(rng.randint(2, 4)))
        block_a = [" ".join([base_a] * rng.randint(1, 3)) for _ in range(size_a)]
        block_b = [" ".join([base_b] * rng.randint(1, 3)) for _ in range(size_b)]
        sentences = block_a + block_b
        scorer = LsaScorer(k=2, stopwords=NO_STOPWORDS)
        s, _ = scorer._decompose(sentences)
        if len(s) != 2 or abs(s[0] - s[1]) < 1e-9 * s[0]:
            continue  # avoid degenerate singular-value ties
        extract = scorer.extract(sentences)
        picked = [i for i, _ in extract.items]
        from_a = sum(1 for i in picked if i < size_a)
        assert (from_a, len(picked) - from_a) == (1, 1)
        done += 1
    _ok("LSA topic separation, 50 two-block corpora")


def test_luhn_hand_oracle():
    sig = frozenset({"tax", "relief"})
    cases = [
        (["tax", "tax", "relief", "granted"], sig, 4, 3.0),  # 3^2 / 3
        (["a", "b", "c"], sig, 4, 0.0),
        (["tax"], sig, 4, 1.0),
        (["tax", "x", "x", "x", "x", "x", "relief"], sig, 4, 1.0),
        (["tax", "x", "x", "x", "x", "relief"], sig, 4, 4 / 6),
        (["x", "tax", "relief", "x", "tax", "x"], sig, 4, 9 / 4),
        (["tax", "relief"], sig, 4, 2.0),
        (["x", "x", "tax", "x", "x"], sig, 4, 1.0),
        (["tax", "x", "relief", "x", "x", "x", "x", "x", "tax"], sig, 4, 4 / 3),
        (["relief", "tax", "tax", "relief"], sig, 4, 4.0),
    ]
    for tokens, significant, gap, expected in cases:
        assert best_cluster_score(tokens, significant, gap) == expected
    _ok("Luhn cluster formula, 10 hand-computed scores")


def test_rouge_identities():
    rng = random.Random(13)
    vocab = ["tax", "court", "appeal", "costs", "deed", "notice"]
    for _ in range(50):
        text = " ".join(rng.choices(vocab, k=rng.randint(2, 20)))
        for n in (1, 2):
            assert rouge_n(text, text, n) == (1.0, 1.0, 1.0)
        assert rouge_l(text, text) == (1.0, 1.0, 1.0)
        other = " ".join(rng.choices(["zz", "qq", "kk"], k=rng.randint(1, 8)))
        assert rouge_n(text, other, 1) == (0.0, 0.0, 0.0)
        assert rouge_l(text, other)[2] == 0.0
    assert rouge_n("a b c", "a b d", 1) == pytest.approx((2 / 3, 2 / 3, 2 / 3))
    _ok("ROUGE identities and hand counts")


def test_prompt_fidelity():
    for name in ("extractive_k", "flowing", "issues", "issues_kw_bt"):
        for lang in ("it", "en"):
            checked_in = (DATA / "prompt_bodies" / f"{name}.{lang}.txt").read_text("utf-8")
            k = 5 if name == "extractive_k" else None
            rendered = render_prompt(load_template(name, lang), " ... ", k=k)
            assert rendered == checked_in, f"{name}.{lang} drifted"
    _ok("prompt fidelity, 4 templates x 2 languages byte-identical")


def test_parser_on_fixture_outputs():
    issues = parse_issue_summary((DATA / "llm_outputs" / "issues_7683.txt").read_text("utf-8"))
    assert len(issues.issues) == 2
    assert len(issues.issues[1].bts) == 3
    assert len(issues.keywords) == 9
    assert issues.issues[1].qd.startswith("What is the current interpretation")

    extract = parse_llm_extract((DATA / "llm_outputs" / "extractive_7683.txt").read_text("utf-8"))
    assert len(extract.items) >= 5
    assert extract.items[0][1].startswith("The fundamental preliminary question")
    _ok("parser on bundled issue and extract outputs")


def _token_spans(text: str) -> list[tuple[int, int]]:
    return [m.span() for m in re.finditer(r"[^\W_]+", text)]


def _mutate(text: str, spans: list[tuple[int, int]], lo: int, hi: int,
            rng: random.Random, nonce: str) -> tuple[str, int]:
    """Take a token window of [lo, hi] tokens and apply one token edit."""
    width = rng.randint(lo, min(hi, len(spans) - 1))
    start = rng.randrange(0, len(spans) - width)
    window = spans[start : start + width]
    original = text[window[0][0] : window[-1][1]]
    offset = window[0][0]
    kind = rng.choice(("sub", "ins", "del"))
    pos = rng.randrange(0, width)
    a, b = window[pos][0] - offset, window[pos][1] - offset
    if kind == "sub":
        mutated = original[:a] + nonce + original[b:]
    elif kind == "ins":
        mutated = original[:b] + " " + nonce + original[b:]
    else:
        cut_end = min(b + 1, len(original))
        mutated = original[:a] + original[cut_end:]
    return mutated, width


def test_grounding_verifier():
    grounds = None
    from tribsum.corpus import parse_decision

    raw = (FIXTURES / "decisions" / "7683.txt").read_text("utf-8")
    grounds = parse_decision(raw, decision_id="7683").section("grounds")

    # every BT of the bundled issue summary is exact or normalized
    issues = parse_issue_summary((DATA / "llm_outputs" / "issues_7683.txt").read_text("utf-8"))
    report = verify_grounding(issues, grounds)
    assert len(report.verdicts) == 6
    assert all(
        v.verdict in (Verdict.EXACT, Verdict.NORMALIZED) for v in report.verdicts
    )

    spans = _token_spans(grounds)
    rng = random.Random(99)

    # 500 single-token edits never verify exact
    checked = 0
    while checked < 500:
        mutated, _ = _mutate(grounds, spans, 8, 40, rng, "zzqx17")
        if mutated in grounds:
            continue  # the edit must actually leave the source
        verdict = verify_grounding(
            IssueSummary(issues=[Issue(1, "q", "p", [mutated])]), grounds
        ).verdicts[0]
        assert verdict.verdict is not Verdict.EXACT
        checked += 1

    # >= 95% of single-token edits on >= 20-token spans stay fuzzy >= 0.95
    good = 0
    total = 200
    for _ in range(total):
        mutated, _ = _mutate(grounds, spans, 20, 40, rng, "zzqx17")
        verdict = verify_grounding(
            IssueSummary(issues=[Issue(1, "q", "p", [mutated])]), grounds
        ).verdicts[0]
        if verdict.verdict in (Verdict.EXACT, Verdict.NORMALIZED):
            continue  # deletion healed into a verbatim span
        if verdict.verdict is Verdict.FUZZY and verdict.similarity >= 0.95:
            good += 1
    assert good / total >= 0.95
    _ok(f"grounding verifier: 6 exact BTs, 500 edits never exact, "
        f"{good}/{total} fuzzy>=0.95")


def test_aggregation_and_blind_assignment():
    decisions = [f"d{i}" for i in range(5)]
    methods = ("it5-flow", "gpt4-flow", "gpt4-item")
    summaries = {
        method: {
            dec: {"summary_id": f"{dec}:{method}", "kind": "flowing",
                  "section": "grounds", "payload": {"text": "s"}}
            for dec in decisions
        }
        for method in methods
    }
    reviewers = [f"rev{i:02d}" for i in range(80)]
    tasks = assign_tasks(decisions, summaries, reviewers, 5, seed=3)
    assert len(tasks) == 1200
    for task in tasks:
        blob = json.dumps(task.reviewer_payload())
        assert not any(m in blob for m in methods)
    again = assign_tasks(decisions, summaries, reviewers, 5, seed=3)
    assert [t.to_record() for t in again] == [t.to_record() for t in tasks]

    three = [t for t in tasks if t.method == "gpt4-flow"][:3]
    ratings = [
        Rating(task_id=t.task_id, reviewer_id=t.reviewer_id,
               scores={c.value: v for c in CRITERIA})
        for t, v in zip(three, (3, 4, 5))
    ]
    rows = aggregate(ratings, three)
    assert rows
    for row in rows:
        assert row.n == 3
        assert format_cell(row.mean, row.std) == "4.00 (0.82)"
    assert format_cell(3.69, 1.06) == "3.69 (1.06)"
    assert re.fullmatch(r"\d+\.\d{2} \(\d+\.\d{2}\)", format_cell(3.69, 1.06))
    _ok("aggregation cells and 80x5x3 blind assignment")


def test_end_to_end_offline(tmp_path):
    env_python = sys.executable
    methods = ["lexrank", "textrank", "lsa", "luhn", "freq"]
    llm_methods = ["llm-extractive", "llm-flowing", "llm-issues"]

    def run(*args):
        proc = subprocess.run(
            [env_python, "-m", "tribsum", *args],
            capture_output=True, text=True, cwd=REPO,
        )
        assert proc.returncode == 0, proc.stderr + proc.stdout
        return proc

    start = time.perf_counter()
    corpus = tmp_path / "corpus.jsonl"
    run("ingest", "--in", str(FIXTURES / "decisions"), "--out", str(corpus))
    summary_args = []
    for method in methods:
        out = tmp_path / f"sum_{method}.jsonl"
        run("summarize", "--method", method, "--section", "grounds", "--k", "5",
            "--in", str(corpus), "--out", str(out))
        summary_args += ["--summaries", str(out)]
    for method in llm_methods:
        out = tmp_path / f"sum_{method}.jsonl"
        run("summarize", "--method", method, "--section", "grounds", "--k", "5",
            "--in", str(corpus), "--out", str(out),
            "--fixtures", str(FIXTURES / "replay" / "llm_replay.jsonl"),
            "--lang", "en", "--model", "gpt-4")
        summary_args += ["--summaries", str(out)]
    for method in methods + llm_methods:
        run("verify", "--summary", str(tmp_path / f"sum_{method}.jsonl"),
            "--corpus", str(corpus),
            "--out", str(tmp_path / f"ver_{method}.jsonl"))
    run("eval", "assign", "--corpus", str(corpus), *summary_args,
        "--reviewers", "4", "--per-reviewer", "3", "--seed", "11",
        "--out", str(tmp_path / "tasks.jsonl"))
    run("eval", "report",
        "--ratings", str(FIXTURES / "ratings_sample.jsonl"),
        "--tasks", str(FIXTURES / "tasks_sample.jsonl"),
        "--out", str(tmp_path / "report.txt"))
    elapsed = time.perf_counter() - start

    assert (tmp_path / "report.txt").read_text() == (
        FIXTURES / "golden" / "eval_report.txt"
    ).read_text()
    tasks = [json.loads(x) for x in (tmp_path / "tasks.jsonl").read_text().splitlines()]
    assert len(tasks) == 4 * 3 * 8
    assert elapsed < 30.0
    _ok(f"end-to-end offline pipeline in {elapsed:.1f}s")
