# weakrank/core/config.py
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional

class Settings(BaseSettings):
    # Project
    PROJECT_NAME: str = "weakrank"
    VERSION: str = "1.0.0"
    REPORT_SCHEMA_VERSION: int = 1

    # Search limits
    DEFAULT_TIME_LIMIT: Optional[float] = None  # seconds
    DEFAULT_NODE_LIMIT: Optional[int] = None

    # Brute force / optima
    ENUMERATION_THRESHOLD: int = 8
    ENUMERATION_HARD_CAP: int = 10
    OPTIMA_CAP: int = 64

    # Parallelism
    WORKERS: int = 1

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    # Bench harness
    BENCH_FLUSH_EVERY: int = 1

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_prefix="WEAKRANK_",
        env_file=".env",
        extra="ignore",
    )

settings = Settings()
