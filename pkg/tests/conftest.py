from pathlib import Path

import pytest

from genoop.parser import parse_program
from genoop.table import ClassTable

GOLDEN = Path(__file__).parent / "golden"
SAMPLES = Path(__file__).parent.parent / "samples"
APPENDIX_C = ["c", "decor_canvas", "list_copier", "box"]


def golden(name: str) -> str:
    return (GOLDEN / f"{name}.mg").read_text()


def golden_class(name: str):
    return parse_program(golden(name), name).classes[0]


def stdlib_with(*sources: str) -> ClassTable:
    return ClassTable.stdlib(*(parse_program(s) for s in sources))


@pytest.fixture
def enum_table():
    return stdlib_with("class C extends Enum<C> {}")


@pytest.fixture
def stdlib():
    return ClassTable.stdlib()


_acceptance_lines: list = []


@pytest.fixture
def acceptance():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"[{number}] {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        _acceptance_lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
