from enum import Enum

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppEnvironment(str, Enum):
    """Application environment types."""

    DEVELOPMENT = "development"
    TESTING = "testing"
    PRODUCTION = "production"


class Settings(BaseSettings):
    """Process-level settings loaded from ADFF_* environment variables."""

    ENVIRONMENT: AppEnvironment = AppEnvironment.PRODUCTION

    # ========================================
    # 📊 LOGGING CONFIGURATION
    # ========================================
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = False
    SHOW_PROGRESS: bool = True

    # ========================================
    # 🧮 COMPUTE
    # ========================================
    # One intra-op thread keeps single-threaded runs bit-reproducible
    NUM_THREADS: int = 1
    DEVICE: str = "cpu"

    # ========================================
    # 👷 WORKER SETTINGS
    # ========================================
    FOLD_WORKERS: int = 1  # >1 trains CV folds concurrently
    EXTRACT_WORKERS: int = 4

    # ========================================
    # 🎵 FEATURE CACHE
    # ========================================
    # Bumping this invalidates every cached spectrogram
    FRONTEND_VERSION: str = "1"

    @field_validator("NUM_THREADS", "FOLD_WORKERS", "EXTRACT_WORKERS")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be >= 1")
        return value

    @property
    def is_testing(self) -> bool:
        return self.ENVIRONMENT == AppEnvironment.TESTING

    model_config = SettingsConfigDict(
        env_prefix="ADFF_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# Create a global settings object
settings = Settings()
