"""Tests for application configuration."""

import os
from unittest.mock import patch

import pytest
from pydantic import ValidationError


class TestSettings:
    """Test cases for Settings class."""

    def test_settings_defaults(self):
        """Test Settings has correct default values."""
        with patch.dict(os.environ, {}, clear=True):
            from app.config import Settings

            settings = Settings(_env_file=None)

            assert settings.LOG_LEVEL == "INFO"
            assert settings.OUTPUT_DIR == "./outputs"
            assert settings.SCENARIO_DIR == "./scenarios"
            assert settings.HYDROBOOST_JOBS is None
            assert settings.INTEGRATOR_STEP == 0.02
            assert settings.SOLVER_SUBSTEPS == 4
            assert settings.SOLVER_MAX_OUTER == 30
            assert settings.SOLVER_MAX_INNER == 500
            assert settings.CONSTRAINT_TOL == 1e-2
            assert settings.GRADIENT_TOL == 1e-3

    def test_settings_from_environment(self):
        """Test Settings loads from environment variables."""
        env_vars = {
            "LOG_LEVEL": "DEBUG",
            "OUTPUT_DIR": "/tmp/hydroboost",
            "HYDROBOOST_JOBS": "4",
            "SOLVER_MAX_INNER": "2000",
            "CONSTRAINT_TOL": "0.001",
        }

        with patch.dict(os.environ, env_vars):
            from app.config import Settings

            settings = Settings(_env_file=None)

            assert settings.LOG_LEVEL == "DEBUG"
            assert settings.OUTPUT_DIR == "/tmp/hydroboost"
            assert settings.HYDROBOOST_JOBS == 4
            assert settings.SOLVER_MAX_INNER == 2000
            assert settings.CONSTRAINT_TOL == 0.001

    def test_settings_track_explicit_fields(self):
        """Only variables actually present in the environment count as set."""
        with patch.dict(os.environ, {"GRADIENT_TOL": "1e-5"}, clear=True):
            from app.config import Settings

            settings = Settings(_env_file=None)

            assert "GRADIENT_TOL" in settings.model_fields_set
            assert "CONSTRAINT_TOL" not in settings.model_fields_set

    def test_settings_case_sensitive(self):
        """Test Settings is case sensitive for env vars."""
        env_vars = {
            "hydroboost_jobs": "8",
            "HYDROBOOST_JOBS": "2",
        }

        with patch.dict(os.environ, env_vars):
            from app.config import Settings

            settings = Settings(_env_file=None)

            assert settings.HYDROBOOST_JOBS == 2

    def test_settings_invalid_number(self):
        """A non-numeric solver setting is rejected."""
        with patch.dict(os.environ, {"SOLVER_MAX_OUTER": "many"}):
            from app.config import Settings

            with pytest.raises(ValidationError):
                Settings(_env_file=None)
