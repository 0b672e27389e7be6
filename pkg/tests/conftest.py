import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = pathlib.Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def synthetic_corpus_path():
    return ROOT / "data" / "synthetic_corpus.jsonl"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
