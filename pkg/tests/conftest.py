"""Shared ladder tables.

Tables come from the run cache (LADDERLAB_CACHE_DIR, else ~/.cache/ladderlab)
and are built on first use.  A cold cache costs about two minutes, most of it
the table anchored at 10^6.
"""

from pathlib import Path

import pytest

from ladderlab.harness import RunConfig, TableProvider

DATA = Path(__file__).parent / "data"

# (T, [(g, k), ...]) each session table must serve
TABLE_NEEDS = {
    1e4: [(20.0, 5)],
    1e5: [(20.0, 5)],
    1e6: [(16.0, 2)],
}


@pytest.fixture(scope="session")
def provider():
    return TableProvider(RunConfig())


@pytest.fixture(scope="session")
def table_1e4(provider):
    return provider.for_requirements(1e4, TABLE_NEEDS[1e4])


@pytest.fixture(scope="session")
def table_1e5(provider):
    return provider.for_requirements(1e5, TABLE_NEEDS[1e5])


@pytest.fixture(scope="session")
def table_1e6(provider):
    return provider.for_requirements(1e6, TABLE_NEEDS[1e6])


@pytest.fixture(scope="session")
def reference_zeros():
    from ladderlab.harness import load_zero_table
    return load_zero_table(DATA / "zeros_100_130.txt")


# ---------------------------------------------------------------- acceptance summary

_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number = int(name.split("_")[2])
        title = " ".join(name.split("_")[3:])
        detail = "; ".join(f"{k}={v}" for k, v in report.user_properties)
        _CRITERIA[number] = (title, "PASS" if report.outcome == "passed" else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, outcome, detail = _CRITERIA[number]
        line = f"criterion {number:2d} {title}: {outcome}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
