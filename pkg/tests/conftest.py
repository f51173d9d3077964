"""Shared fixtures for the pwtest test suite"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pwtest.core import PwConfig, SampleSet  # noqa: E402


@pytest.fixture
def rng():
    """Fixed RNG for reproducible tests."""
    return np.random.default_rng(42)


@pytest.fixture
def oracle_pair():
    """d = 2 instance whose best direction is (0, 1) with PW = 2."""
    X = SampleSet([[0.0, 0.0], [1.0, 0.0]])
    Y = SampleSet([[0.0, 2.0], [1.0, 2.0]])
    return X, Y


@pytest.fixture
def quick_pw():
    """Small optimizer budget for tests that only need a valid run."""
    return PwConfig(iterations=30, hidden=(8,), batch_size=16, log_every=0)


@pytest.fixture
def random_pair(rng):
    X = SampleSet(rng.normal(size=(30, 3)))
    Y = SampleSet(rng.normal(loc=0.5, size=(25, 3)))
    return X, Y
