import os
import sys

import pytest

HERE = os.path.dirname(__file__)
ROOT = os.path.dirname(HERE)
PRESENTATIONS = os.path.join(ROOT, "presentations")
sys.path.insert(0, HERE)

ACCEPTANCE: dict = {}


def record(n: int, title: str, ok: bool, detail: str = ""):
    ACCEPTANCE[n] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def presentations():
    if not os.path.isdir(PRESENTATIONS) or not os.listdir(PRESENTATIONS):
        import runpy
        runpy.run_path(os.path.join(ROOT, "scripts", "make_examples.py"), run_name="not_main")["main"](PRESENTATIONS)
    return PRESENTATIONS
