"""Shared pytest fixtures for hydroboost tests."""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from engines.environment import EnvironmentModel  # noqa: E402
from engines.vehicle import AnalyticCoefficients, CoefficientProvider, VehicleParams, derive_added_mass  # noqa: E402

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


# ---------------------------------------------------------------------------
# Vehicle and environment fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def env():
    """Default seawater and ISA properties."""
    return EnvironmentModel()


@pytest.fixture(scope="session")
def vehicle():
    """Default vehicle geometry and mass properties."""
    return VehicleParams()


@pytest.fixture(scope="session")
def added(vehicle, env):
    """Added-mass set derived for the default vehicle in seawater."""
    return derive_added_mass(vehicle, env.water_density)


@pytest.fixture
def provider():
    """Analytic fallback coefficients."""
    return CoefficientProvider.analytic()


@pytest.fixture
def placeholder_provider():
    return CoefficientProvider.analytic(AnalyticCoefficients.placeholder())


@pytest.fixture
def rng():
    """Seeded generator so random-state tests are repeatable."""
    return np.random.default_rng(20240607)


# ---------------------------------------------------------------------------
# File fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def scenario_dir():
    return SCENARIO_DIR


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path."""
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def minimal_launch_file(write_file):
    """Launch scenario giving only x0, the exit pitch and t_f."""
    return write_file("minimal.scenario", """
[scenario]
t_f = 15

[initial]
u = 10
z = 100

[terminal]
theta = 45
""")


@pytest.fixture
def coefficient_table(write_file):
    """Small alpha/mach grid; beta is a single slice."""
    rows = ["alpha_deg,beta_deg,mach,cx0,cz0,cm0,cmq"]
    for alpha in (-10.0, 0.0, 10.0):
        for mach in (0.0, 0.5):
            a = np.radians(alpha)
            rows.append(f"{alpha},0,{mach},{-0.12 - 0.1 * mach},{-6.0 * a},{-2.0 * a},-400")
    return write_file("coefficients.csv", "\n".join(rows) + "\n")
