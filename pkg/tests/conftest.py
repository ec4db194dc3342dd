import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# Filled in by test_acceptance; printed at the end of the run so every
# criterion gets its own pass/fail line in the terminal summary.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {name}: {detail}")
