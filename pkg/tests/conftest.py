import os

import pytest

ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running opt-in checks (RSFPL_LONG=1)")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("RSFPL_LONG"):
        return
    skip = pytest.mark.skip(reason="set RSFPL_LONG=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
