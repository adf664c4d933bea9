import json
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Core Settings
    APP_NAME: str = "vcgkit"
    DEBUG: bool = False
    LOG_FILE: Optional[Path] = None

    # Auction defaults
    DEFAULT_SEED: int = 0
    DEFAULT_SOLVER: str = "dp"
    TIE_BREAK_RULE: str = "random_weights"

    # Size guards
    ENUMERATION_MAX_GOODS: int = 12
    DP_MAX_GOODS: int = 20
    WINNER_SET_MAX: int = 100_000
    TIE_BREAK_MAX_GOODS: int = 12
    EXHAUSTIVE_MAX_GOODS: int = 4
    EXHAUSTIVE_MAX_BIDDERS: int = 4

    # Soundness suite
    CHECK_MAX_GOODS: int = 3
    CHECK_MAX_BIDDERS: int = 3
    CHECK_INSTANCES: int = 200
    CHECK_BID_GRID: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4, 5])
    EQUIVALENCE_TABLES_PER_SHAPE: int = 200
    TRUTHFULNESS_BIDDERS: int = 3
    TRUTHFULNESS_GRID: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    TRUTHFULNESS_SEEDS: List[int] = Field(default_factory=lambda: [0, 1, 42])

    MAX_WORKERS: int = 1

    model_config = SettingsConfigDict(
        env_prefix="VCGKIT_",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    @property
    def check_grid(self) -> List[Fraction]:
        return [Fraction(v) for v in self.CHECK_BID_GRID]

    @property
    def truthfulness_grid(self) -> List[Fraction]:
        return [Fraction(v) for v in self.TRUTHFULNESS_GRID]

    @classmethod
    def load_from_json(cls, config_path: Path) -> "Settings":
        """Load settings from a JSON config file, merged over defaults and environment."""
        with open(config_path, "r", encoding="utf-8") as f:
            data = json.load(f)
        if "LOG_FILE" in data and data["LOG_FILE"] is not None:
            data["LOG_FILE"] = Path(data["LOG_FILE"])
        return cls(**data)


# Global settings instance
settings = Settings()


def apply_settings(new_settings: Settings) -> None:
    """
    Copy values from another Settings object onto the shared instance, so
    modules holding a reference to `settings` see the change.
    """
    for name in Settings.model_fields:
        setattr(settings, name, getattr(new_settings, name))
