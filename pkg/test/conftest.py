import sys
from pathlib import Path

import numpy as np
import pytest

SOURCE_PATH: Path = Path(__file__).parent.parent.joinpath("src").resolve()
if str(SOURCE_PATH) not in sys.path:
    sys.path.insert(0, str(SOURCE_PATH))

from moments import Grid  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture
def grid() -> Grid:
    return Grid(4096, 20.0)


@pytest.fixture
def small_grid() -> Grid:
    return Grid(1024, 16.0)
