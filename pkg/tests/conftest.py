"""Pytest fixtures for root-level tests (CLI, golden diagrams)."""

from pathlib import Path

import pytest

from mfhc.schemas.expansion import expansion_to_model
from mfhc.schemas.reports import dump_json
from mfhc.services.qexp import make_expansion, term

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def expansion_file(tmp_path: Path) -> Path:
    """Weight −2 expansion q^{-1} + 3 + q² in the JSON exchange format."""
    f = make_expansion([term(1, q=-1), term(3), term(1, q=2)], weight=-2)
    p = tmp_path / "f.json"
    p.write_text(dump_json(expansion_to_model(f)), encoding="utf-8")
    return p
