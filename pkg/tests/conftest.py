import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--long-running", action="store_true", default=False, help="run minutes-scale checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long-running"):
        return
    skip = pytest.mark.skip(reason="needs --long-running")
    for item in items:
        if "long_running" in item.keywords:
            item.add_marker(skip)


_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if _CRITERIA.get(n, ("", ""))[1] == "FAIL":
        return
    if call.when == "setup" and call.excinfo is not None:
        status = "SKIPPED" if call.excinfo.errisinstance(pytest.skip.Exception) else "FAIL"
        _CRITERIA[n] = (title, status)
    elif call.when == "call":
        _CRITERIA[n] = (title, "FAIL" if call.excinfo is not None else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status:<7} {title}")
