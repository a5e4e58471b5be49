"""Per-criterion PASS/FAIL summary for the acceptance suite."""
from collections import defaultdict

_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.failed:
        _outcomes[crit].append((report.nodeid, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_outcomes):
        results = _outcomes[crit]
        ok = sum(p for _, p in results)
        status = "PASS" if ok == len(results) else "FAIL"
        tr.write_line(f"criterion {crit}: {status} ({ok}/{len(results)} checks)")
        for nodeid, passed in results:
            if not passed:
                tr.write_line(f"    failed: {nodeid.split('::', 1)[-1]}")
