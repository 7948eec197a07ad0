import sys
from pathlib import Path

import pytest
from hypothesis import settings

import relpres

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("seeded", max_examples=200, derandomize=True, deadline=None,
                          print_blob=True)
settings.load_profile("seeded")


@pytest.fixture(scope="session")
def zxz():
    return relpres.load_fixture("zxz")


@pytest.fixture(scope="session")
def z6():
    return relpres.load_fixture("z6")


@pytest.fixture(scope="session")
def f2rel():
    return relpres.load_fixture("f2-rel")


@pytest.fixture(scope="session")
def e1():
    return relpres.load_fixture("e1")


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=str):
        terminalreporter.write_line(ACCEPTANCE[key])
