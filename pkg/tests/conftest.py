"""Shared pytest plumbing.

The acceptance suite appends one verdict line per criterion to VERDICTS;
printing them from the terminal-summary hook keeps them visible under
pytest's default output capture.
"""

VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.line(line)
