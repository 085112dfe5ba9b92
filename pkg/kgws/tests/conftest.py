"""Pytest fixtures for the spectrum library and API."""

import os
import sys

# Add package directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Set test environment BEFORE any imports
os.environ["KGWS_DEBUG"] = "false"
os.environ["KGWS_LOG_LEVEL"] = "WARNING"
os.environ.pop("KGWS_HBAR_C", None)

import pytest  # noqa: E402
from fastapi.testclient import TestClient  # noqa: E402

# Clear any cached settings
from config import get_settings  # noqa: E402

get_settings.cache_clear()

from acceptance import synthetic_system  # noqa: E402
from main import app  # noqa: E402
from models import NuclearInput, system_from_mass_number  # noqa: E402
from oracle import OracleConfig  # noqa: E402


@pytest.fixture(scope="function")
def client():
    """Create a test client."""
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def calcium():
    """A=40 well with the default r0, a and pion rest energy."""
    return system_from_mass_number(NuclearInput(A=40))


@pytest.fixture
def lead():
    """A=208 well."""
    return system_from_mass_number(NuclearInput(A=208))


@pytest.fixture
def shallow_case():
    """alpha=4, l=3 well built to hold an n=0 state with eps=0.4."""
    return synthetic_system(alpha=4.0, l=3, v=0.4, eps=0.4)


@pytest.fixture
def wide_case():
    """alpha=5, l=4 well with an n=0 state at eps=0.3."""
    return synthetic_system(alpha=5.0, l=4, v=0.3, eps=0.3)


@pytest.fixture
def thin_case():
    """alpha=8, l=13 well, deep enough in gamma^2 to hold a bound state."""
    return synthetic_system(alpha=8.0, l=13, gamma2=2.09, eps=0.4)


@pytest.fixture
def excited_case():
    """alpha=4, l=3 well with an n=1 state."""
    return synthetic_system(alpha=4.0, l=3, v=0.4, eps=0.02, n=1)


@pytest.fixture
def cheap_oracle():
    """Mathematical-domain shooting config sized for unit tests."""
    return OracleConfig(domain="mathematical", length=20.0, step=2e-3, scan_points=100, refine_tol=1e-10)
