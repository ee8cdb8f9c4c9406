ACCEPTANCE_LINES = {}


def record(number, passed, detail):
    ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
