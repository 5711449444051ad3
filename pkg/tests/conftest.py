from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> (passed, description, detail)
ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}


def load_grid(name: str) -> list[list[str]]:
    rows = [line.split() for line in (FIXTURES / name).read_text().splitlines() if line.strip()]
    rows[0][0] = ""
    return rows


@pytest.fixture
def d4_fixture():
    return load_grid("d4_gamma0_R.txt")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, desc, detail = ACCEPTANCE[k]
        line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {desc}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
