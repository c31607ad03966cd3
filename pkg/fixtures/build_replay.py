#!/usr/bin/env python3
"""Rebuild fixtures/replay/llm_replay.jsonl from the output text files.

Renders the same prompts the summarize pipeline sends (English
templates, k=5, model gpt-4, temperature 0) over the grounds section of
each bundled decision and keys each recorded output by the request
hash. Run from the repository root after changing decision fixtures or
recorded outputs:

    python fixtures/build_replay.py
"""

from __future__ import annotations

import json
from pathlib import Path

from tribsum.corpus import HeaderPatterns, parse_decision
from tribsum.llm import CompletionRequest, load_template, render_prompt, request_hash

HERE = Path(__file__).parent
MODEL = "gpt-4"
K = 5
LANGUAGE = "en"
SECTION = "grounds"

TEMPLATE_BY_METHOD = {
    "llm-extractive": "extractive_k",
    "llm-flowing": "flowing",
    "llm-issues": "issues_kw_bt",
}


def main() -> None:
    records = []
    for decision_path in sorted((HERE / "decisions").glob("*.txt")):
        decision = parse_decision(
            decision_path.read_text("utf-8"),
            HeaderPatterns(),
            decision_id=decision_path.stem,
        )
        text = decision.section(SECTION)
        for method, template_name in TEMPLATE_BY_METHOD.items():
            output_path = HERE / "replay" / "outputs" / f"{decision.id}_{method}.txt"
            template = load_template(template_name, LANGUAGE)
            k = K if template_name == "extractive_k" else None
            prompt = render_prompt(template, text, k=k)
            request = CompletionRequest.user(MODEL, prompt)
            result_text = output_path.read_text("utf-8")
            records.append(
                {
                    "request_hash": request_hash(request),
                    "request": request.to_record(),
                    "result": {
                        "text": result_text,
                        "usage": {
                            "input_tokens": len(prompt.split()),
                            "output_tokens": len(result_text.split()),
                        },
                        "provider_meta": {},
                    },
                    "attempts": 1,
                }
            )
    out = HERE / "replay" / "llm_replay.jsonl"
    with out.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {len(records)} records -> {out}")


if __name__ == "__main__":
    main()
