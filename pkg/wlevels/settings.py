"""
Run Settings
Validated run configuration for the command line, with environment defaults.
"""
import os
import logging
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from . import GOLDEN_DIR

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ('yaml', 'csv', 'markdown', 'html')


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == '':
        return default
    try:
        return int(value)
    except ValueError:
        logger.warning(f"{name}={value!r} is not an integer, using {default}")
        return default


def default_jobs() -> int:
    return _env_int('WLEVELS_JOBS', 1)


def default_seed() -> int:
    return _env_int('WLEVELS_SEED', 20240601)


class RunConfig(BaseModel):
    """Everything a command needs besides its positional arguments."""

    command: str
    specs: List[str] = Field(default_factory=list)
    output_format: str = 'yaml'
    out: Optional[Path] = None
    verbosity: int = 0
    jobs: int = Field(default_factory=default_jobs)
    seed: int = Field(default_factory=default_seed)
    jacobi_samples: int = Field(default_factory=lambda: _env_int('WLEVELS_JACOBI_SAMPLES', 10000))
    exhaustive_dim: int = Field(default_factory=lambda: _env_int('WLEVELS_EXHAUSTIVE_DIM', 60))
    golden_dir: Path = GOLDEN_DIR
    regenerate_goldens: bool = False

    @field_validator('output_format')
    @classmethod
    def _check_format(cls, value: str) -> str:
        value = value.lower()
        if value not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got {value!r}")
        return value

    @field_validator('jobs')
    @classmethod
    def _check_jobs(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"jobs must be at least 1, got {value}")
        return value

    @field_validator('verbosity', 'jacobi_samples', 'exhaustive_dim')
    @classmethod
    def _check_non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"expected a non-negative integer, got {value}")
        return value

    @property
    def log_level(self) -> Optional[int]:
        """Level requested by -v flags, or None to keep the environment default."""
        if self.verbosity >= 2:
            return logging.DEBUG
        if self.verbosity == 1:
            return logging.INFO
        return None
