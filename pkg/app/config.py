"""Application configuration using Pydantic settings."""

from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    LOG_LEVEL: str = "INFO"
    OUTPUT_DIR: str = "./outputs"
    SCENARIO_DIR: str = "./scenarios"

    # Sweep workers; overrides --jobs when set
    HYDROBOOST_JOBS: Optional[int] = None

    # Integration
    INTEGRATOR_STEP: float = 0.02
    SOLVER_SUBSTEPS: int = 4

    # Solver defaults (scenario [solver] sections override these)
    SOLVER_MAX_OUTER: int = 30
    SOLVER_MAX_INNER: int = 500
    CONSTRAINT_TOL: float = 1e-2
    GRADIENT_TOL: float = 1e-3

    # Pydantic v2 configuration
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore"
    )


# Global settings instance
settings = Settings()
