from pathlib import Path

import pytest

HERE = Path(__file__).parent


@pytest.fixture
def golden():
    """Read one expected diagnostic line from ``tests/golden``."""

    def read(name):
        return (HERE / "golden" / f"{name}.txt").read_text(encoding="ascii").rstrip("\n")

    return read


@pytest.fixture
def fixture_path():
    def path(name):
        return str(HERE / "fixtures" / name)

    return path
