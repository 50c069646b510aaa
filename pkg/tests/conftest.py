"""Collects outcomes of tests marked ``acceptance(n)`` and prints one line per
criterion at the end of the session."""

import pytest

TITLES = {
    1: "Example 1 S-functions",
    2: "Example 1 Darboux pairs",
    3: "Example 1 symmetries",
    4: "Example 1 first integrals",
    5: "Example 2 end-to-end",
    6: "operator fidelity",
    7: "property suites",
    8: "trivial fixtures",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call" or rep.failed:
        _outcomes.setdefault(n, []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in TITLES.items():
        results = _outcomes.get(n)
        if results is None:
            verdict = "NOT RUN"
        else:
            verdict = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE criterion {n} ({title}): {verdict}")
