from __future__ import annotations

from pathlib import Path

import pytest

from newsrank.events import available_backends

ROOT = Path(__file__).resolve().parents[1]
MINI_CONFIG = ROOT / "minicorpus" / "config.json"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def mini_config() -> Path:
    return MINI_CONFIG


@pytest.fixture(params=available_backends())
def backend(request) -> str:
    return request.param


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(rep, "when", "call") == "call":
                rows.append((nodeid.split("::", 1)[1], "PASS" if outcome == "passed" else "FAIL"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(rows):
        terminalreporter.write_line(f"{status}  {name}")
