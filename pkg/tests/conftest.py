from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from semielliptic import BigComplex, lattice_from_invariants, lattice_from_periods

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

PREC = 256


@pytest.fixture(scope="session")
def square():
    """g2 = 4, g3 = 0: the lemniscatic lattice, tau = i."""
    return lattice_from_invariants(4, 0, PREC)


@pytest.fixture(scope="session")
def hexagonal():
    """g2 = 0, g3 = 4."""
    return lattice_from_invariants(0, 4, PREC)


@pytest.fixture(scope="session")
def generic():
    """g2 = 1, g3 = 2, without complex multiplication."""
    return lattice_from_invariants(1, 2, PREC)


@pytest.fixture(scope="session")
def skew():
    """Periods (1, 0.3 + 1.1i), entered as decimal strings."""
    return lattice_from_periods(BigComplex("1", PREC), BigComplex("0.3+1.1j", PREC), PREC)


@pytest.fixture
def rng():
    return random.Random(12345)
