import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
RULE_CODES = ("E001", "E002", "E003", "E004", "E005", "E006", "E007",
              "E008", "E009", "E010", "E011", "E012", "E013", "W101")

_acceptance: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when == "teardown":
        return
    number, title = marker.args
    ok = report.passed if report.when == "call" else not report.failed
    prev = _acceptance.get(number, (title, True))[1]
    _acceptance[number] = (title, prev and ok)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"AC{number} {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def rule_case():
    def load(code):
        case = FIXTURES / "rules" / code
        return case, [tuple(x) for x in json.loads((case / "expected.json").read_text())]
    return load
