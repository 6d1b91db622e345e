"""
Configuration settings for the dilated shapelet toolkit.
"""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class GenerationSettings(BaseSettings):
    """Shapelet bank generation defaults."""

    n_shapelets: int = Field(default=10000, gt=0)
    lengths: list[int] = Field(default=[11])
    p_norm: float = Field(default=0.8, ge=0.0, le=1.0)
    p1: float = Field(default=5.0, ge=0.0, le=100.0)
    p2: float = Field(default=10.0, ge=0.0, le=100.0)
    seed: int = Field(default=0, ge=0, lt=2**64)

    @field_validator("lengths")
    @classmethod
    def validate_lengths(cls, v: list[int]) -> list[int]:
        if not v or min(v) < 2:
            raise ValueError("Lengths must be a non-empty list of integers >= 2")
        return v

    model_config = SettingsConfigDict(env_prefix="RDST_GENERATION_")


class RidgeSettings(BaseSettings):
    """Regularization grid defaults."""

    alpha_min: float = Field(default=1e-3, gt=0.0)
    alpha_max: float = Field(default=1e3, gt=0.0)
    n_alphas: int = Field(default=10, gt=0)

    model_config = SettingsConfigDict(env_prefix="RDST_RIDGE_")


class RuntimeSettings(BaseSettings):
    """Parallelism settings."""

    threads: Optional[int] = Field(default=None, gt=0)
    block_size: int = Field(default=64, gt=0)

    model_config = SettingsConfigDict(env_prefix="RDST_RUNTIME_")


class MonitoringSettings(BaseSettings):
    """Logging configuration settings."""

    log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(default=None)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v.upper()

    model_config = SettingsConfigDict(env_prefix="RDST_MONITORING_")


class Settings(BaseSettings):
    """Main application settings."""

    app_name: str = Field(default="rdst")

    # Sub-settings
    generation: GenerationSettings = GenerationSettings()
    ridge: RidgeSettings = RidgeSettings()
    runtime: RuntimeSettings = RuntimeSettings()
    monitoring: MonitoringSettings = MonitoringSettings()

    model_config = SettingsConfigDict(
        env_prefix="RDST_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
