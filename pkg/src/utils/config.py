"""
Configuration management for nsvalue
"""
from typing import Optional
import yaml
from pathlib import Path
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings


class AppConfig(BaseModel):
    name: str = "nsvalue"
    version: str = "0.1.0"


class SolverConfig(BaseModel):
    """Knobs of the mixed packing/covering solver, all relative to epsilon"""

    potential_scale: float = Field(4.0, gt=0, description="eta = potential_scale * (ln M1 + ln M2 + 1) / eps")
    step_fraction: float = Field(0.125, gt=0, le=0.5, description="guaranteed-safe row growth per round, times eps")
    qualify_fraction: float = Field(0.125, ge=0, le=0.5, description="gradient ratio slack for incremented columns")
    acceptance_ratio: float = Field(0.5, gt=0, le=1, description="allowed smoothed-max / smoothed-min growth slack")
    early_stop: bool = True
    round_safety_factor: float = Field(1.0, gt=0)
    tightening_retries: int = Field(1, ge=0)
    exact_mode: bool = False
    exact_max_columns: int = Field(40, ge=0)
    dense_max_entries: int = Field(250_000, ge=0)


class ExactConfig(BaseModel):
    max_variables: int = 50_000
    max_pivots: Optional[int] = None
    classical_max_assignments: int = 10_000_000


class VerifierConfig(BaseModel):
    max_randomness_bits: int = 24


class EngineConfig(BaseModel):
    threads: int = Field(1, ge=1)
    approximation_method: str = "binary-search"  # binary-search, grid


class LoggingConfig(BaseModel):
    level: str = "INFO"
    format: str = "json"
    file: Optional[str] = None


class NSValueConfig(BaseSettings):
    app: AppConfig = AppConfig()
    solver: SolverConfig = SolverConfig()
    exact: ExactConfig = ExactConfig()
    verifier: VerifierConfig = VerifierConfig()
    engine: EngineConfig = EngineConfig()
    logging: LoggingConfig = LoggingConfig()

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "NSVALUE_",
        "extra": "ignore",
        "env_nested_delimiter": "__"
    }


def load_config(config_path: str = "config.yaml") -> NSValueConfig:
    """Load configuration from YAML file and environment variables"""
    from dotenv import load_dotenv

    load_dotenv()

    config_file = Path(config_path)
    config_data = {}

    if config_file.exists():
        with open(config_file, 'r', encoding='utf-8') as f:
            config_data = yaml.safe_load(f) or {}

    return NSValueConfig(**config_data)
