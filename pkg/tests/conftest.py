import pytest

from simplex_obstruction import build_matrix

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def system2():
    return build_matrix(2)


@pytest.fixture(scope="session")
def system3():
    return build_matrix(3)


@pytest.fixture(scope="session")
def system4():
    return build_matrix(4)


@pytest.fixture(scope="session")
def dense4(system4):
    return system4.dense()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # keep the call-phase outcome so fixtures can see it during teardown
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
