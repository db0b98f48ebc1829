import sys


def pytest_terminal_summary(terminalreporter):
    # echo the acceptance verdicts after the run, whatever the capture mode
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
