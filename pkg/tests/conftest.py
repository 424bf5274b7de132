import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_RESULTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")
    config.stash[_RESULTS] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    status = "PASS" if rep.passed else "FAIL"
    item.config.stash[_RESULTS].append((number, title, status, detail))


def pytest_terminal_summary(terminalreporter, config):
    rows = sorted(config.stash.get(_RESULTS, []))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, detail in rows:
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} | {detail}")
