"""Shared fixtures for the Pixel Adapter Bench test suite"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from data_models import SeededRng  # noqa: E402


@pytest.fixture
def rng():
    return SeededRng(42)
