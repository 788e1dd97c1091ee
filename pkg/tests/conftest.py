import random
from pathlib import Path

import pytest

import weakrank
from weakrank.ingest import load_matrix_csv
from weakrank.schemas.solve import SolveConfig

DATA = Path(weakrank.__file__).parent / "data"


def load(name: str):
    return load_matrix_csv((DATA / name).read_text(encoding="utf-8"), source=name)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def eight_items():
    """Eight items; the unconstrained optimum is 1 3 | 2 4 7 | 8 | 5 6 at 10.78."""
    return load("eight_items.csv")


@pytest.fixture(scope="session")
def counterexample():
    return load("counterexample.csv")


@pytest.fixture(scope="session")
def four_items():
    return load("four_items.csv")


@pytest.fixture
def search_cfg() -> SolveConfig:
    return SolveConfig(strategy="search", time_limit=None, node_limit=None)


@pytest.fixture
def oracle_cfg() -> SolveConfig:
    return SolveConfig(strategy="brute", enumeration_threshold=10)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
