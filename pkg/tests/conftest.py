import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


# acceptance bookkeeping: one PASS/FAIL line per criterion at the end of the run
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    n = marker.args[0]
    entry = _CRITERIA.setdefault(n, {"passed": 0, "failed": 0, "details": []})
    if rep.when == "call" and rep.passed:
        entry["passed"] += 1
    elif rep.failed:
        entry["failed"] += 1
        entry["details"].append(f"{item.name} failed")
    entry["details"] += [v for k, v in item.user_properties if k == "detail" and rep.when == "call"]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        tag = "PASS" if e["failed"] == 0 else "FAIL"
        total = e["passed"] + e["failed"]
        tr.write_line(f"criterion {n}: {tag}  ({e['passed']}/{total} checks passed)")
    for n in sorted(_CRITERIA):
        for line in _CRITERIA[n]["details"]:
            tr.write_line(f"  [{n}] {line}")
