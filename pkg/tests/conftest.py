import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA: dict = {}


def record(k: int, ok: bool, detail: str) -> None:
    CRITERIA[k] = (ok, detail)
    print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
