# config.py
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional, Tuple

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from models.ring import CoefficientField


class Settings(BaseSettings):
    # Arithmetic
    field: str = "prime:32003"

    # Groebner engine
    step_limit: int = Field(1_000_000, ge=1)
    chain_criterion: bool = False
    basis_cache_size: int = Field(256, ge=0)

    # Combinatorics
    perm_limit: int = Field(9, ge=1)

    # Resolution oracle
    taylor_cap: int = Field(16, ge=1)

    # Universal GB probe
    trials: int = Field(50, ge=0)
    seed: int = 7

    # Fan-out width for verification and strand homology
    workers: int = Field(1, ge=1)

    # Logging
    log_level: str = "WARNING"

    # HTTP service
    api_host: str = "127.0.0.1"
    api_port: int = 3000

    model_config = SettingsConfigDict(extra="ignore", validate_assignment=True)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Only explicit arguments; the environment is never consulted
        return (init_settings,)

    @property
    def coefficient_field(self) -> CoefficientField:
        return CoefficientField.parse(self.field)

    def override(self, **values) -> "Settings":
        """Copy with the non-None values applied and re-validated"""
        update = {k: v for k, v in values.items() if v is not None}
        return Settings(**{**self.model_dump(), **update})


settings = Settings()


_active: ContextVar[Optional[Settings]] = ContextVar("active_settings", default=None)


def get_settings() -> Settings:
    """Settings in force for the current invocation"""
    return _active.get() or settings


@contextmanager
def using(overrides: Settings) -> Iterator[Settings]:
    token = _active.set(overrides)
    try:
        yield overrides
    finally:
        _active.reset(token)
