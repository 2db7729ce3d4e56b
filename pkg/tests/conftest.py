"""Shared test plumbing: the acceptance-criterion scoreboard.

Acceptance tests report their verdict through record_criterion so the run
ends with one PASS/FAIL line per criterion, independent of how pytest
groups or reorders the assertions themselves.
"""

CRITERIA: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    CRITERIA[number] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail = CRITERIA[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"CRITERION {number:2d}: {verdict} — {detail}")
