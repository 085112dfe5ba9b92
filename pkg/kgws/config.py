from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="KGWS_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    app_name: str = "KGWS Spectrum API"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "WARNING"

    # MeV*fm; KGWS_HBAR_C is the documented override
    hbar_c: float = Field(default=197.3269804, gt=0)

    r0: float = Field(default=1.285, gt=0)
    diffuseness: float = Field(default=0.65, gt=0)
    m0c2: float = Field(default=139.570, gt=0)

    scan_points: int = Field(default=10_000, ge=100)
    scan_tol: float = Field(default=1e-10, gt=0)

    oracle_step: float = Field(default=1e-3, gt=0)
    oracle_scan_points: int = Field(default=20_000, ge=100)
    oracle_refine_tol: float = Field(default=1e-9, gt=0)
    oracle_length: float = Field(default=40.0, gt=0)
    oracle_domain: str = "physical"
    match_tol: float = Field(default=1e-4, gt=0)

    # coarser shooting for the published-table oracle column; those couplings are weak
    table1_oracle_step: float = Field(default=1e-2, gt=0)
    table1_oracle_scan_points: int = Field(default=2_000, ge=100)

    normalization_step: float = Field(default=0.05, gt=0)
    float_digits: int = Field(default=10, ge=1, le=17)

    cors_origins: list[str] = [
        "http://127.0.0.1:8000",
        "http://localhost:8000",
    ]


@lru_cache
def get_settings():
    return Settings()
