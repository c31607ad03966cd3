from __future__ import annotations

from pathlib import Path

import pytest

from tribsum.corpus import Decision, parse_decision

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def fixture_decisions() -> dict[str, Decision]:
    decisions = {}
    for path in sorted((FIXTURES / "decisions").glob("*.txt")):
        decisions[path.stem] = parse_decision(
            path.read_text("utf-8"), decision_id=path.stem
        )
    return decisions


@pytest.fixture(scope="session")
def grounds_7683(fixture_decisions) -> str:
    return fixture_decisions["7683"].section("grounds")
