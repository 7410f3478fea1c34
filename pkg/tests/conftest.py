import os

import pytest

ACCEPTANCE_LINES = []


def acceptance_seed() -> int:
    env = os.environ.get("BERK_SEED")
    return int(env) if env else 0


@pytest.fixture
def record_acceptance():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
