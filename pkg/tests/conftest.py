import os

import pytest
from hypothesis import settings

from mirank import load_bundled, partition

settings.register_profile("default", deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def pima():
    return load_bundled("pima")


@pytest.fixture(scope="session")
def longley():
    return load_bundled("longley")


@pytest.fixture(scope="session")
def pima_part(pima):
    return partition(pima, ["diabetes"])


@pytest.fixture(scope="session")
def longley_part(longley):
    return partition(longley, ["Employed"])


_ACCEPTANCE: dict[int, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" in report.nodeid and name.startswith("test_criterion_"):
        number = int(name.split("_")[2])
        ok = report.outcome == "passed" and _ACCEPTANCE.get(number, "PASS") == "PASS"
        _ACCEPTANCE[number] = "PASS" if ok else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {_ACCEPTANCE[number]}")
