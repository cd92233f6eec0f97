"""Collects the per-criterion verdicts from the acceptance module."""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda ln: int(ln.split()[1].rstrip(":")[2:])):
        terminalreporter.write_line(line)
