import pytest

DETAILS: dict[int, list[str]] = {}
RESULTS: dict[int, str] = {}


@pytest.fixture
def note(request):
    """Append a measured value to the summary line of this test's acceptance criterion."""
    number = request.node.get_closest_marker("criterion").args[0]
    DETAILS.setdefault(number, [])
    return DETAILS[number].append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    number = marker.args[0]
    RESULTS[number] = "PASS" if rep.passed else "FAIL"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        detail = "; ".join(DETAILS.get(number, []))
        terminalreporter.write_line(f"criterion {number:2d}: {RESULTS[number]}  {detail}")
