import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

# criterion number -> (ok, detail), filled by test_acceptance
ACCEPTANCE = {}
# outcomes of the property suites run in this session
PROPERTY = {"collected": 0, "passed": 0, "failed": []}


def pytest_collection_modifyitems(session, config, items):
    # acceptance checks run last so that criterion 8 can read the property outcomes
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py") or "test_acceptance.py" in it.nodeid)
    PROPERTY["collected"] = sum(1 for it in items if it.get_closest_marker("property"))


def pytest_runtest_logreport(report):
    if "property" not in report.keywords:
        return
    if report.when == "call" and report.passed:
        PROPERTY["passed"] += 1
    elif report.failed:
        PROPERTY["failed"].append(report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"CRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}")
