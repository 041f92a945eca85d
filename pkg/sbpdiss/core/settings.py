import json
from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ConfigDict
from pydantic_settings import BaseSettings, SettingsConfigDict


class LoggingConfigModel(BaseModel):
    level: str = "INFO"
    model_config = ConfigDict(extra="ignore")


class OutputConfigModel(BaseModel):
    directory: str = "results"
    float_digits: int = Field(default=17, ge=1, le=17)
    manifest_name: str = "manifest.json"
    model_config = ConfigDict(extra="ignore")


class SolverConfigModel(BaseModel):
    rtol: float = Field(default=1e-11, gt=0)
    atol: float = Field(default=1e-11, gt=0)
    dt_min: float = Field(default=1e-10, gt=0)
    safety: float = Field(default=0.9, gt=0, le=1)
    min_factor: float = Field(default=0.2, gt=0)
    max_factor: float = Field(default=5.0, gt=1)
    max_steps: int = Field(default=2_000_000, ge=1)
    complex_step: float = Field(default=1e-30, gt=0)
    fd_step: float = Field(default=1e-6, gt=0)
    model_config = ConfigDict(extra="ignore")


class VerifyConfigModel(BaseModel):
    samples: int = Field(default=1000, ge=1)
    seed: int = Field(default=1234, ge=0)
    model_config = ConfigDict(extra="ignore")


class PresetsConfigModel(BaseModel):
    """Named dissipation coefficients, resolved against s (FD) or p (SE)."""

    large: float = 3.125
    small: float = 0.625
    fd_base: float = 5.0
    se: float = 0.1
    se_base: float = 2.25
    se_khi: list[float] = Field(
        alias="seKhi",
        default_factory=lambda: [0.01, 0.004, 0.002, 0.0008, 0.0004, 0.0002],
    )
    se_khi_first_degree: int = Field(alias="seKhiFirstDegree", default=3)
    model_config = ConfigDict(populate_by_name=True, extra="ignore")


class JsonConfigModel(BaseModel):
    logging: LoggingConfigModel
    output: OutputConfigModel
    solver: SolverConfigModel
    verify: VerifyConfigModel
    presets: PresetsConfigModel
    model_config = ConfigDict(extra="ignore")


class EnvSettings(BaseSettings):
    log_level: str | None = Field(default=None, alias="SBPDISS_LOG_LEVEL")
    output_dir: str | None = Field(default=None, alias="SBPDISS_OUTPUT_DIR")
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )


class AppSettings(BaseModel):
    logging: LoggingConfigModel
    output: OutputConfigModel
    solver: SolverConfigModel
    verify: VerifyConfigModel
    presets: PresetsConfigModel
    model_config = ConfigDict(extra="ignore")


def _resolve_config_path() -> Path:
    return Path(__file__).resolve().parent.parent.joinpath("config", "app_config.json")


def _load_config_data(path: Path) -> JsonConfigModel:
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    with path.open(encoding="utf-8") as config_file:
        raw_data: dict[str, Any] = json.load(config_file)
    return JsonConfigModel.model_validate(raw_data)


def _build_settings(
        config_model: JsonConfigModel,
        overrides: EnvSettings,
) -> AppSettings:
    logging = config_model.logging
    if overrides.log_level:
        logging = logging.model_copy(update={"level": overrides.log_level})
    output = config_model.output
    if overrides.output_dir:
        output = output.model_copy(update={"directory": overrides.output_dir})
    return AppSettings(
        logging=logging,
        output=output,
        solver=config_model.solver,
        verify=config_model.verify,
        presets=config_model.presets,
    )


@lru_cache
def get_settings() -> AppSettings:
    config_path = _resolve_config_path()
    json_config = _load_config_data(config_path)
    env_settings = EnvSettings()
    return _build_settings(json_config, env_settings)
