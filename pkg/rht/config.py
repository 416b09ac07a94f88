"""Configuration management with Pydantic validation."""

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

VALID_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
VALID_LOG_FORMATS = ['standard', 'json']


def _log_level(v: str) -> str:
    v_upper = v.upper()
    if v_upper not in VALID_LOG_LEVELS:
        raise ValueError(f"Log level must be one of {VALID_LOG_LEVELS}")
    return v_upper


def _log_format(v: str) -> str:
    v_lower = v.lower()
    if v_lower not in VALID_LOG_FORMATS:
        raise ValueError(f"Log format must be one of {VALID_LOG_FORMATS}")
    return v_lower


class LimitsConfig(BaseModel):
    """Size limits for declared objects and towers."""

    max_dim: int = Field(default=64, ge=1, description="Largest ambient dimension accepted from input")
    stages: int = Field(default=5, ge=1, le=12, description="Default stage bound for 1-minimal towers")
    max_generators: Optional[int] = Field(default=None, ge=1, description="Cap on the total tower generator count")

    @model_validator(mode='after')
    def default_generator_cap(self) -> 'LimitsConfig':
        """Tower generators are capped by max_dim unless set explicitly."""
        if self.max_generators is None:
            self.max_generators = self.max_dim
        return self


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: str = Field(default="WARNING", description="Log level")
    format: str = Field(default="standard", description="Log format: standard or json")
    file: Optional[Path] = Field(default=None, description="Log file path")
    console: bool = Field(default=False, description="Log to stderr")
    max_bytes: int = Field(default=10485760, ge=1024, description="Max log file size in bytes")
    backup_count: int = Field(default=5, ge=0, description="Number of log file backups")

    @field_validator('level')
    @classmethod
    def validate_level(cls, v: str) -> str:
        """Validate log level."""
        return _log_level(v)

    @field_validator('format')
    @classmethod
    def validate_format(cls, v: str) -> str:
        return _log_format(v)


class MetricsConfig(BaseModel):
    """Computation metrics output."""

    file: Optional[Path] = Field(default=None, description="Prometheus textfile to write after the run")

    @property
    def enabled(self) -> bool:
        return self.file is not None


class OutputConfig(BaseModel):
    """Report output."""

    json_output: bool = Field(default=False, description="Write JSON reports instead of text")
    assert_mode: bool = Field(default=False, description="Map false verdicts to exit code 1")


class AppConfig(BaseSettings):
    """Main application configuration; every field can be set through an ``RHT_`` variable."""

    model_config = SettingsConfigDict(
        env_prefix='RHT_',
        case_sensitive=False,
        extra='ignore',
    )

    # Configuration file
    config_file: Optional[Path] = Field(default=None, description="Configuration file path")

    # Limits
    max_dim: int = Field(default=64, ge=1, description="Largest ambient dimension accepted from input")
    stages: int = Field(default=5, ge=1, le=12, description="Default stage bound for 1-minimal towers")
    max_generators: Optional[int] = Field(default=None, ge=1, description="Cap on the total tower generator count")

    # Output
    json_output: bool = Field(default=False, description="Write JSON reports")
    assert_mode: bool = Field(default=False, description="Exit 1 when an asserted verdict is false")
    metrics_file: Optional[str] = Field(default=None, description="Prometheus textfile path")

    # Logging
    log_level: str = Field(default="WARNING", description="Log level")
    log_format: str = Field(default="standard", description="Log format")
    log_file: Optional[str] = Field(default=None, description="Log file path")
    log_to_console: bool = Field(default=False, description="Log to stderr")

    def get_limits_config(self) -> LimitsConfig:
        """Get limits configuration object."""
        return LimitsConfig(max_dim=self.max_dim, stages=self.stages, max_generators=self.max_generators)

    def get_logging_config(self) -> LoggingConfig:
        """Get logging configuration."""
        return LoggingConfig(
            level=self.log_level,
            format=self.log_format,
            file=Path(self.log_file) if self.log_file else None,
            console=self.log_to_console,
        )

    def get_metrics_config(self) -> MetricsConfig:
        return MetricsConfig(file=Path(self.metrics_file) if self.metrics_file else None)

    def get_output_config(self) -> OutputConfig:
        return OutputConfig(json_output=self.json_output, assert_mode=self.assert_mode)

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        return _log_level(v)

    @field_validator('log_format')
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        return _log_format(v)
