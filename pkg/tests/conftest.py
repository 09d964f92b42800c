import random

import pytest

from fvs.generators import named_graphs, random_suite


@pytest.fixture(scope="session")
def suite():
    return random_suite()


@pytest.fixture(scope="session")
def named():
    return named_graphs()


@pytest.fixture
def rng():
    return random.Random(12345)


# acceptance criteria record one line each; printed after the run
_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def acceptance():
    def record(criterion: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE[criterion] = (ok, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda c: int(c.split()[0])):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
