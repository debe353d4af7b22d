from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def corpus_files() -> list[Path]:
    files = sorted(FIXTURES_DIR.glob("*.py"))
    assert files, "fixture corpus is missing"
    return files
