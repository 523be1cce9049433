import _suite


def pytest_terminal_summary(terminalreporter):
    if _suite.CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _suite.CRITERIA:
            terminalreporter.write_line(line)
