import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_recipes():
    with open(FIXTURES / "recipes.jsonl", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


@pytest.fixture(scope="session")
def fixture_foods():
    with open(FIXTURES / "fooddb.jsonl", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


@pytest.fixture(scope="session")
def fixture_embeddings():
    from caloriepipe.matcher import load_embedding_file

    return load_embedding_file(FIXTURES / "embeddings.txt")
