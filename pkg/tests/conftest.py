import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for genprog

from qrind.parser import parse_ir

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig3_text() -> str:
    return (DATA / "fig3.qri").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fig3_program(fig3_text):
    return parse_ir(fig3_text)
