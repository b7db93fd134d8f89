import pathlib

import pytest

DATA = pathlib.Path(__file__).parent / "data"

# criterion number -> (title, passed)
CRITERIA: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def data_dir() -> pathlib.Path:
    return DATA


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    ok = call.excinfo is None
    prev = CRITERIA.get(number, (title, True))
    CRITERIA[number] = (title, prev[1] and ok)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, ok = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
