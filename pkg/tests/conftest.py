import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracle module

from snnverify import default_solver_command
from snnverify.model import SnnError


@pytest.fixture(scope="session")
def solver_command() -> str:
    try:
        return default_solver_command()
    except SnnError as exc:  # pragma: no cover - environment problem
        pytest.fail(f"SMT solver unavailable: {exc}")
