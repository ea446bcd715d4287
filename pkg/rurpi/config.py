import os
from functools import lru_cache
from typing import Any, Literal

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

ExecutorKind = Literal["process", "thread"]
HankelMethod = Literal["gauss", "fast"]


def _cpu_count() -> int:
    return os.cpu_count() or 1


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="", env_file=".env", extra="ignore", populate_by_name=True
    )

    threads: int = Field(default_factory=_cpu_count, ge=1, alias="RUR_THREADS")
    certify_mode: int = Field(1, ge=0, alias="RUR_CERTIFY")
    cert_threads: int = Field(6, ge=1, alias="RUR_CERT_THREADS")
    confirm_extra: int = Field(1, ge=0, alias="RUR_CONFIRM")
    seed: int = Field(0, ge=0, lt=1 << 64, alias="RUR_SEED")
    precision: int = Field(53, ge=1, alias="RUR_PRECISION")
    executor: ExecutorKind = Field("process", alias="RUR_EXECUTOR")
    hankel_method: HankelMethod = Field("gauss", alias="RUR_HANKEL")
    form_attempts: int = Field(20, ge=1, alias="RUR_FORM_ATTEMPTS")
    form_bound: int = Field(1 << 20, ge=1, alias="RUR_FORM_BOUND")
    max_primes: int = Field(20000, ge=1, alias="RUR_MAX_PRIMES")
    witness_primes: int = Field(3, ge=1, alias="RUR_WITNESS_PRIMES")
    form_prime_budget: int = Field(5, ge=1, alias="RUR_FORM_PRIME_BUDGET")
    log_level: str = Field("WARNING", alias="RUR_LOG_LEVEL")


class SolveConfig(BaseModel):
    """Per-run knobs; defaults come from the environment via Settings."""

    threads: int = Field(1, ge=1)
    certify_mode: int = Field(1, ge=0)
    cert_threads: int = Field(6, ge=1)
    confirm_extra: int = Field(1, ge=0)
    seed: int = Field(0, ge=0, lt=1 << 64)
    isolate: bool = False
    precision: int = Field(53, ge=1)
    executor: ExecutorKind = "process"
    hankel_method: HankelMethod = "gauss"
    form_attempts: int = Field(20, ge=1)
    form_bound: int = Field(1 << 20, ge=1)
    max_primes: int = Field(20000, ge=1)
    witness_primes: int = Field(3, ge=1)
    form_prime_budget: int = Field(5, ge=1)

    @classmethod
    def from_settings(
        cls, settings: Settings | None = None, **overrides: Any
    ) -> "SolveConfig":
        settings = settings or get_settings()
        values = {
            name: getattr(settings, name)
            for name in cls.model_fields
            if hasattr(settings, name)
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@lru_cache
def get_settings() -> Settings:
    return Settings()
