import pytest

from lpfd.modelio import load_model
from lpfd.testgen import fuzz_models

CORPUS_SIZE = 200

# criterion number -> list of (test name, passed)
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _CRITERIA.setdefault(mark.args[0], []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        runs = _CRITERIA[n]
        ok = all(p for _, p in runs)
        failed = [name for name, p in runs if not p]
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}{detail}")


@pytest.fixture(scope="session")
def rockjazz():
    return load_model("rockjazz")


@pytest.fixture(scope="session")
def pd1():
    return load_model("pd1")


@pytest.fixture(scope="session")
def pd2():
    return load_model("pd2")


@pytest.fixture(scope="session")
def corpus():
    """The 200 seeded fuzz models (sub-seeds 0..199)."""
    return fuzz_models(CORPUS_SIZE, 0)


@pytest.fixture(scope="session")
def small_corpus():
    return fuzz_models(40, 1000)
