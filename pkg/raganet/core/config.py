from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Минимальная конфигурация окружения"""

    # Filesystem
    WORKDIR: str = "."

    # Logging
    LOG_LEVEL: str = "INFO"

    # Reproducibility
    SEED: int = 0

    # Parallelism
    WORKERS: int = 4

    # Tuning
    TUNING_A4: float = 440.0

    model_config = SettingsConfigDict(
        env_prefix="RAGANET_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()
