"""
Configuration settings for the prefopt optimizer
"""
import os
from pydantic_settings import BaseSettings
from typing import List, Optional, Tuple


class Settings(BaseSettings):
    """Application settings"""

    # App Info
    APP_NAME: str = "prefopt"
    APP_VERSION: str = "1.0.0"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{line} - {message}"

    # Worker parallelism (None = all available cores)
    PREFOPT_THREADS: Optional[int] = None

    # Output layout
    OUTPUT_DIR: str = "runs"
    CHECKPOINT_PREFIX: str = "checkpoint_"
    BUNDLE_FILENAME: str = "bundle.json"
    METRICS_FILENAME: str = "metrics.csv"
    CSV_FLOAT_FORMAT: str = "%.17g"

    # Wall-clock column in metrics.csv is zero unless enabled,
    # so that metrics files stay byte-identical across runs.
    RECORD_WALL_TIME: bool = False

    # Gaussian-process fitting
    GP_FIT_STEPS: int = 200
    GP_FIT_STEP_SIZE: float = 0.05
    GP_RESTARTS: int = 4
    GP_JITTER_LEVELS: List[float] = [1e-8, 1e-7, 1e-6, 1e-5, 1e-4]
    GP_SIGMA_FLOOR: float = 1e-9

    # Objective-space bookkeeping
    IDEAL_MARGIN: float = 1e-3
    REFERENCE_POINT: Tuple[float, float] = (1.1, 1.1)
    CACHE_DECIMALS: int = 12
    ORACLE_MAX_GRID: int = 10_000_000

    @property
    def worker_count(self) -> int:
        if self.PREFOPT_THREADS is not None and self.PREFOPT_THREADS > 0:
            return self.PREFOPT_THREADS
        return os.cpu_count() or 1

    def checkpoint_name(self, epoch: int) -> str:
        return f"{self.CHECKPOINT_PREFIX}{epoch}.json"

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
