"""Configuration module for the treefit toolkit."""

import os
from pathlib import Path
from typing import ClassVar

from typing_extensions import Self

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# プロジェクトのルートディレクトリを基準として定義する
BASE_DIR = Path(__file__).resolve().parent.parent

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class TreefitSettings(BaseSettings):
    """
    Runtime settings loaded from the environment and an optional `.env` file.

    Only process-level concerns live here (worker count, logging, guards).
    Fitting hyperparameters are passed explicitly through `FitConfig`.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="TREEFIT_",
        case_sensitive=True,
        extra="ignore",  # 未定義の環境変数を無視
    )

    # Worker settings - 0はCPU数から自動決定
    THREADS: int = Field(default=0, description="Worker count cap (0 = auto)")

    # Logging settings
    LOG_LEVEL: str = Field(default="INFO", description="Root log level")
    LOG_FILE: str | None = Field(
        default=None,
        description="Optional path of a rotating log file",
    )

    # O(n^4)の厳密計算を許可する最大点数
    EXACT_DELTA_MAX_N: int = Field(
        default=1500,
        description="Largest n accepted by exact hyperbolicity without override",
    )

    # 平滑化計算で一度に確保する4つ組ブロックの要素数
    BLOCK_ELEMENTS: int = Field(
        default=4_000_000,
        description="Element budget of one quadruple block",
    )

    @field_validator("THREADS")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        """ワーカー数が0以上であることを検証"""
        if v < 0:
            msg = "THREADS must be 0 (auto) or a positive integer"
            raise ValueError(msg)
        return v

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """ログレベルの形式を検証"""
        level = str(v).upper()
        if level not in LOG_LEVELS:
            msg = f"LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}"
            raise ValueError(msg)
        return level

    @field_validator("EXACT_DELTA_MAX_N")
    @classmethod
    def validate_guard(cls, v: int) -> int:
        """ガード値が4以上であることを検証"""
        if v < 4:
            msg = "EXACT_DELTA_MAX_N must be at least 4"
            raise ValueError(msg)
        return v

    @field_validator("BLOCK_ELEMENTS")
    @classmethod
    def validate_block_elements(cls, v: int) -> int:
        """ブロックサイズの下限を検証"""
        if v < 10_000:
            msg = "BLOCK_ELEMENTS must be at least 10000"
            raise ValueError(msg)
        return v

    @property
    def log_path(self) -> Path | None:
        """Absolute path of the log file, if file logging is enabled."""
        if not self.LOG_FILE:
            return None
        path = Path(self.LOG_FILE)
        if not path.is_absolute():
            path = BASE_DIR / path
        return Path(os.path.normpath(str(path)))


class TestSettings(BaseSettings):
    """
    Test-specific settings that never read `.env` and default to one worker.

    Only `TEST_` prefixed environment variables are honoured, so a developer
    shell configured for production runs cannot leak into the test suite.
    """

    model_config: ClassVar[SettingsConfigDict] = SettingsConfigDict(
        env_file=None,  # .envファイルを読み込まない
        env_prefix="TEST_",
        case_sensitive=True,
        extra="ignore",
    )

    THREADS: int = 1
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: str | None = None
    EXACT_DELTA_MAX_N: int = 1500
    BLOCK_ELEMENTS: int = 4_000_000
    TESTING: bool = Field(default=True, frozen=True)  # 常にTrue

    @model_validator(mode="after")
    def validate_safe_test_config(self) -> Self:
        """テスト設定の安全性チェック"""
        if self.THREADS < 0:
            msg = f"Test config contains invalid THREADS: {self.THREADS}"
            raise ValueError(msg)
        return self

    @property
    def log_path(self) -> Path | None:
        """Tests never log to files."""
        return None


def get_config(testing: bool = False) -> TreefitSettings | TestSettings:
    """
    Factory function to get appropriate settings.

    Args:
        testing: If True, returns TestSettings with safe defaults.
                If False, returns TreefitSettings loaded from the environment.

    Returns:
        TreefitSettings or TestSettings instance.

    Raises:
        pydantic.ValidationError: If environment values are invalid.
    """
    if testing:
        return TestSettings()
    return TreefitSettings()


# テスト実行中かどうかの判定
def is_testing() -> bool:
    """現在テスト実行中かどうかを判定"""
    return os.getenv("TESTING", "false").lower() == "true"
