"""Shared pytest plumbing.

The acceptance tests record one pass/fail line per criterion; output
capture would otherwise hide the lines for passing criteria, so they are
replayed in the terminal summary.
"""

criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if criterion_lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in criterion_lines:
            terminalreporter.write_line(line)
