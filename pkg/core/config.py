# core/config.py
from __future__ import annotations

from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Centralized simulator configuration.

    Loads `QCOMM_*` environment variables (and `.env`) and provides
    typed access across the runtime, protocols, search and harness.
    """

    # ─────────────────────────────────────────────
    # Pydantic Settings Config
    # ─────────────────────────────────────────────
    model_config = SettingsConfigDict(
        env_prefix="QCOMM_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # ─────────────────────────────────────────────
    # Randomness
    # ─────────────────────────────────────────────
    seed: int | None = Field(default=None, ge=0)
    default_seed: int = Field(default=20240611, ge=0)

    # ─────────────────────────────────────────────
    # Capacity limits
    # ─────────────────────────────────────────────
    max_qubits: int = 16
    prime_search_cap: int = 10_000_000
    search_max_strategies: int = 2**20
    search_max_states: int = 200_000
    dj_search_node_budget: int = 2_000_000
    dj_search_time_budget: float = 30.0

    # ─────────────────────────────────────────────
    # Experiments
    # ─────────────────────────────────────────────
    pass_sigma: float = 5.0
    batch_threshold: int = 10_000
    worker_count: int = Field(default=1, ge=1)

    # ─────────────────────────────────────────────
    # Verification suite sizes
    # ─────────────────────────────────────────────
    verify_epr_trials: int = Field(default=1_000_000, ge=1)
    verify_grover_runs: int = Field(default=200, ge=1)
    verify_dj_samples: int = Field(default=1000, ge=1)

    log_level: str = "INFO"

    @field_validator("max_qubits")
    @classmethod
    def _at_least_twelve(cls, value: int) -> int:
        if value < 12:
            raise ValueError("max_qubits must allow at least 12 qubits")
        return value

    # ─────────────────────────────────────────────
    # Derived Properties
    # ─────────────────────────────────────────────
    @property
    def seed_source(self) -> str:
        return "env:QCOMM_SEED" if self.seed is not None else "config"


# ─────────────────────────────────────────────
# Cached Settings Instance
# ─────────────────────────────────────────────
@lru_cache
def get_settings() -> Settings:
    """
    Returns a cached Settings instance so config
    is only loaded once per process.
    """
    return Settings()
