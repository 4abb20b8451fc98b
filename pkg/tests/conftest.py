import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from config import Settings  # noqa: E402
from utils import metrics  # noqa: E402
from utils.linalg import Tolerances  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture
def tol() -> Tolerances:
    return Tolerances()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def fast_settings() -> Settings:
    """Settings small enough for a full reproduction run inside a unit test."""
    return Settings(audit_samples=40, seesaw_restarts=8, seesaw_max_iters=200)


@pytest.fixture(autouse=True)
def _reset_metrics():
    metrics.reset()
    yield
    metrics.reset()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
