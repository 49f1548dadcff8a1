import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from sciwealth.ingest import InstitutionRecord

_CRITERIA: dict[str, bool] = {}


def make_records(citations, country="US", start_rank=1):
    return [
        InstitutionRecord(start_rank + k, f"{country} institution {start_rank + k}", country, c)
        for k, c in enumerate(citations)
    ]


@pytest.fixture
def records_factory():
    return make_records


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the terminal summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA[label] = _CRITERIA.get(label, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
