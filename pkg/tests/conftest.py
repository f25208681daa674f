from pathlib import Path

import pytest
from hypothesis import HealthCheck
from hypothesis import settings

from axiominspector.galois import Corpus
from axiominspector.parser import read_sequence_file

DATA_DIR = Path(__file__).parent / "data"

settings.register_profile(
    "axiominspector",
    max_examples=200,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("axiominspector")


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def subject():
    return read_sequence_file(DATA_DIR / "subject.txt")


@pytest.fixture
def tail():
    return read_sequence_file(DATA_DIR / "tail.txt")


@pytest.fixture
def norm():
    return read_sequence_file(DATA_DIR / "norm.txt")


@pytest.fixture
def corpus():
    return Corpus.load(DATA_DIR / "corpus.json")
