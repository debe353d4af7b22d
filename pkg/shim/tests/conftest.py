from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def corpus_files() -> list[Path]:
    files = sorted((REPO_ROOT / "fixtures").glob("*.py"))
    assert files, "fixture corpus is missing"
    return files
