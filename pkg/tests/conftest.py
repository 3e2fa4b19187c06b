"""Collects outcomes of tests marked ``criterion`` and prints one line per criterion."""

from collections import OrderedDict

import pytest

_results: "OrderedDict[str, list]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            label, text = m.args
            _results.setdefault(label, [text, []])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m and (rep.when == "call" or rep.failed):
        _results[m.args[0]][1].append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label, (text, runs) in _results.items():
        if not runs:
            continue
        ok = all(p for _, p in runs)
        failed = [n for n, p in runs if not p]
        line = f"{'PASS' if ok else 'FAIL'}  {label:<4} {text}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)
