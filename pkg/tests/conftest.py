from pathlib import Path

import pytest
from hypothesis import settings

from bettistab import data_path
from bettistab.io import load_ideal, load_rees

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"

# (criterion, passed, detail) collected by test_acceptance.py
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def ideal(name):
    return load_ideal(data_path(name + ".ideal"))


def rees(name):
    return load_rees(data_path(name + ".rees"))


@pytest.fixture(scope="session")
def ex13():
    return ideal("example13")


@pytest.fixture(scope="session")
def ex14():
    return ideal("example14")


@pytest.fixture(scope="session")
def xy():
    return ideal("xy")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
