#!/usr/bin/env python3
"""
Pytest configuration and fixtures for the percolation tests.
"""

import os

import pytest

from triperc.lattice import DomainKind, DomainSpec
from triperc.percolation.sampling import SeedRecord, sample


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
def small_full_plane():
    """Full-plane box for n = 16 with truncation 16."""
    return DomainSpec.full_plane(16, truncation=16)


@pytest.fixture(scope="session")
def small_half_plane():
    """Half-plane box for n = 8 with truncation 16."""
    return DomainSpec.half_plane(8, truncation=16)


@pytest.fixture(scope="session")
def tiny_half_box():
    """Twelve-site half-plane box used for exhaustive checks."""
    return DomainSpec.toy(DomainKind.HALF, (-1, 4, 0, 1), segment_n=3)


@pytest.fixture(scope="function")
def random_samples():
    """
    Return a function drawing a few reproducible samples of a domain.
    """
    def draw(domain, count=20, seed=11, stream=0):
        return [sample(domain, SeedRecord(seed, stream, t)) for t in range(count)]

    return draw
