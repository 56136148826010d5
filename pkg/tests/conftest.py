import numpy as np
import pytest

from config.settings import Settings
from models.environments import make_environment
from models.mnl_instance import MnlInstance


@pytest.fixture
def g1():
    return make_environment("g1")


@pytest.fixture
def g4():
    return make_environment("g4")


@pytest.fixture
def geo():
    return make_environment("geo")


@pytest.fixture
def uniform4():
    return MnlInstance((1.0, 1.0, 1.0, 1.0), name="uniform")


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def settings(monkeypatch):
    for name in ("MNL_DEFAULT_RUNS", "MNL_DEFAULT_HORIZON", "MNL_DEFAULT_ALPHA", "MNL_DEFAULT_SEED",
                 "MNL_CHECKPOINT_COUNT", "MNL_CONCURRENT_PROCESSING_LIMIT", "MNL_OUTPUT_DIR",
                 "MNL_SHOW_PROGRESS", "MNL_LOG_LEVEL", "MNL_DEBUG_MODE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("MNL_SHOW_PROGRESS", "False")
    return Settings()
