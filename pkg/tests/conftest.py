"""Prints the acceptance verdicts after the run (one line per criterion)."""

import re

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}
_CRASHED: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if m and report.failed:
        _CRASHED.setdefault(int(m.group(1)), m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE and not _CRASHED:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(set(ACCEPTANCE) | set(_CRASHED)):
        if n in ACCEPTANCE:
            title, ok, detail = ACCEPTANCE[n]
            ok = ok and n not in _CRASHED
        else:
            title, ok, detail = _CRASHED[n], False, "raised before reporting"
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
