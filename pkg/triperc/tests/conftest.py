#!/usr/bin/env python3
"""
Pytest configuration and fixtures for the triperc tests.
"""

import os
import shutil

import pytest

from triperc.config import Settings


def pytest_collection_modifyitems(config, items):
    """Skip tests marked slow unless TRIPERC_SLOW_TESTS is set."""
    if os.environ.get("TRIPERC_SLOW_TESTS"):
        return
    skip = pytest.mark.skip(reason="set TRIPERC_SLOW_TESTS=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo runs")


@pytest.fixture(scope="session")
def test_dir():
    """Return the absolute path to the test directory."""
    return os.path.dirname(os.path.abspath(__file__))


@pytest.fixture(scope="session")
def temp_dir(test_dir):
    """
    Create and return a temporary directory for record and CSV files.
    This directory will be deleted after all tests are completed.
    """
    temp_path = os.path.join(test_dir, "temp")
    os.makedirs(temp_path, exist_ok=True)

    yield temp_path

    if os.path.exists(temp_path):
        shutil.rmtree(temp_path)


@pytest.fixture(scope="function")
def quiet_settings():
    """In-process settings without progress bars."""
    return Settings(progress=False)
