"""
Configuration management using Pydantic Settings.
Lab-wide defaults loaded from COVERT_LAB_* environment variables or .env.
"""
import logging

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class LabSettings(BaseSettings):
    """Lab settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="COVERT_LAB_",
        case_sensitive=False,
        extra="ignore"
    )

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: str = Field(default="covert_lab.log", description="Log file name")
    log_dir: str = Field(default="logs", description="Directory for JSON log files")

    # Outputs
    output_dir: str = Field(default="results", description="Default directory for result files")
    database_url: str = Field(
        default="sqlite:///./covert_lab_runs.db",
        description="Run ledger connection URL"
    )

    # Scale caps
    codebook_memory_cap_bits: int = Field(
        default=2 ** 30,
        ge=1,
        description="Maximum stored inner codebook bits per chunk (2^m * B)"
    )
    micro_max_length: int = Field(
        default=20,
        ge=1,
        le=24,
        description="Largest chunk length for exact micro-scale distributions"
    )
    field_max_degree: int = Field(default=20, ge=2, le=20, description="Largest GF(2^m) degree")
    enumeration_cap: int = Field(
        default=2 ** 20,
        ge=1,
        description="Largest message space enumerated by combinatorial oracles"
    )

    # Design solver
    default_delta: float = Field(default=0.01, gt=0.0, lt=0.5, description="Slackness delta")
    grid_step: float = Field(default=0.01, gt=0.0, lt=0.5, description="Coarse k1 grid step")
    refine_step: float = Field(default=1e-4, gt=0.0, lt=0.01, description="k1 refinement step")

    # Execution
    n_jobs: int = Field(default=1, description="joblib worker count (-1 = all cores)")
    mc_batch_size: int = Field(
        default=10_000,
        ge=1,
        description="Monte Carlo rows drawn per seeded batch"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate logging level name."""
        if not isinstance(logging.getLevelName(v.upper()), int):
            raise ValueError(f"Invalid log level: {v}")
        return v.upper()

    @field_validator("n_jobs")
    @classmethod
    def validate_n_jobs(cls, v: int) -> int:
        """joblib accepts positive counts or -1."""
        if v == 0 or v < -1:
            raise ValueError(f"Invalid n_jobs: {v}. Must be positive or -1")
        return v


# Global settings instance
settings = LabSettings()
