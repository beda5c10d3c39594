from __future__ import annotations

from pathlib import Path

import pytest

from radai.radl import load
from radai.resolve import resolve_links

ROOT = Path(__file__).resolve().parent.parent
MOBILITY = ROOT / "fixtures" / "mobility"

_acceptance: dict[str, str] = {}


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "acceptance(label): one acceptance criterion, summarised after the run")


def pytest_runtest_logreport(report: pytest.TestReport) -> None:
    label = getattr(report, "acceptance_label", None)
    if label is None:
        return
    if report.when == "call" or report.failed:
        if _acceptance.get(label) != "FAIL":
            _acceptance[label] = "PASS" if report.passed else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance_label = marker.args[0]


def pytest_terminal_summary(terminalreporter) -> None:
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_acceptance, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{_acceptance[label]}  {label}")


@pytest.fixture(scope="session")
def mobility_doc():
    return resolve_links(load([MOBILITY]))


@pytest.fixture(scope="session")
def mobility_path() -> Path:
    return MOBILITY
