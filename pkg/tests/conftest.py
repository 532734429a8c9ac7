"""Test configuration ensuring the src package is importable."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

SRC_PATH = Path(__file__).resolve().parents[1] / "src"
if str(SRC_PATH) not in sys.path:
    sys.path.insert(0, str(SRC_PATH))

from timed_membrane_nets import fixtures  # noqa: E402
from timed_membrane_nets.dsl import load_model  # noqa: E402


@pytest.fixture()
def timed_psystem():
    """Two-membrane system with a delayed rule."""
    return load_model(fixtures.TIMED_PSYSTEM)


@pytest.fixture()
def timed_net():
    """Timed Petri net of the two-membrane system."""
    return load_model(fixtures.TIMED_NET)


@pytest.fixture()
def branching_psystem():
    """Single membrane with two maximal steps."""
    return load_model(fixtures.BRANCHING_PSYSTEM)


@pytest.fixture()
def branching_net():
    """Net with two max-enabled steps."""
    return load_model(fixtures.BRANCHING_NET)


@pytest.fixture()
def model_file(tmp_path: Path):
    """Write an example model to a temporary file and return its path."""

    def write(name: str) -> Path:
        path = tmp_path / f"{name}.tmn"
        path.write_text(fixtures.get_example(name).text, encoding="utf-8")
        return path

    return write
