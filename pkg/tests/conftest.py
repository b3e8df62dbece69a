import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[1]
    if report.when == "call" or report.failed or report.skipped:
        prev = _ACCEPTANCE.get(name)
        if prev != "FAIL":
            _ACCEPTANCE[name] = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    # group parametrised cases under their criterion number
    crit = {}
    for name, outcome in sorted(_ACCEPTANCE.items()):
        num = name.split("_")[2]
        crit.setdefault(num, []).append((name, outcome))
    terminalreporter.section("acceptance criteria")
    for num in sorted(crit):
        cases = crit[num]
        overall = "FAIL" if any(o == "FAIL" for _, o in cases) else (
            "SKIP" if all(o == "SKIP" for _, o in cases) else "PASS")
        label = cases[0][0].split("[")[0][len("test_criterion_00_"):]
        terminalreporter.write_line(f"criterion {int(num):2d} {overall}  {label}")
