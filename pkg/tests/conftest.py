from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from curv.corpus import CorpusConfig, corpus, worked_example_complex, worked_example_graph

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str = "") -> None:
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def graphs():
    return corpus(CorpusConfig())


@pytest.fixture(scope="session")
def worked_graph():
    return worked_example_graph()


@pytest.fixture(scope="session")
def worked_complex():
    return worked_example_complex()


@pytest.fixture()
def rng():
    return random.Random(1234)
