"""Shared fixtures and hypothesis profile."""

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tametop.ordinal import Ordinal

settings.register_profile(
    "tametop",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "tametop"))

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIGS_DIR = os.path.join(REPO_ROOT, "configs")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1)


@pytest.fixture
def configs_dir() -> str:
    return CONFIGS_DIR


@pytest.fixture
def omega() -> Ordinal:
    return Ordinal.parse("w")
