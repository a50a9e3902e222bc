import random

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20261017)


CRITERIA: list = []


def record(number: int, ok: bool, text: str, seconds: float):
    CRITERIA.append((number, ok, text, seconds))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text, seconds in sorted(CRITERIA):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  ({seconds:6.2f}s)  {text}")
