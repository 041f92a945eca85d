"""Experiment configuration parsing and dissipation-strength presets."""

from __future__ import annotations

import json
from typing import Any

from pydantic import ValidationError

from sbpdiss.cli.models import ExperimentConfig
from sbpdiss.core.exceptions import ConfigParseError, ConfigValidationError
from sbpdiss.core.logger import get_logger
from sbpdiss.core.settings import PresetsConfigModel, get_settings

logger = get_logger(__name__)

PRESETS = ("large", "small", "se", "se-khi")


def resolve_epsilon(eps: float | str, s: int, p: int, presets: PresetsConfigModel | None = None) -> float:
    """Numeric dissipation strength; presets scale with s (FD) or p (SE)."""
    presets = presets or get_settings().presets
    if not isinstance(eps, str):
        if eps < 0.0:
            raise ConfigValidationError([{"field": "eps", "reason": f"must be non-negative, got {eps}"}])
        return float(eps)
    key = eps.strip().lower()
    if key == "large":
        return presets.large * presets.fd_base ** (-s)
    if key == "small":
        return presets.small * presets.fd_base ** (-s)
    if key == "se":
        return presets.se * presets.se_base ** (-p)
    if key == "se-khi":
        index = p - presets.se_khi_first_degree
        if not 0 <= index < len(presets.se_khi):
            last = presets.se_khi_first_degree + len(presets.se_khi) - 1
            raise ConfigValidationError(
                [{"field": "eps", "reason": f"se-khi preset covers p = {presets.se_khi_first_degree}..{last}, got {p}"}]
            )
        return presets.se_khi[index]
    try:
        return resolve_epsilon(float(key), s, p, presets)
    except ValueError:
        raise ConfigValidationError(
            [{"field": "eps", "reason": f"unknown preset {eps!r}. Available: {list(PRESETS)}"}]
        ) from None


def _field_errors(exc: ValidationError) -> list[dict[str, str]]:
    errors = []
    for item in exc.errors():
        location = ".".join(str(part) for part in item.get("loc", ())) or "config"
        errors.append({"field": location, "reason": item.get("msg", "invalid")})
    return errors


def parse_config(
        text: str | bytes,
        presets: PresetsConfigModel | None = None,
        overrides: dict[str, Any] | None = None,
) -> ExperimentConfig:
    """Parse and validate experiment configuration JSON.

    ``overrides`` (command-line values) replace keys of the file; a
    ``command`` override must agree with the file when both are given.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigParseError(f"Config is not UTF-8: {exc.reason}", 1, exc.start + 1) from exc
    try:
        raw: Any = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(raw, dict):
        raise ConfigValidationError([{"field": "config", "reason": "top level must be an object"}])

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "command" and raw.get("command", value) != value:
            raise ConfigValidationError(
                [{"field": "command", "reason": f"config is for {raw['command']!r}, command line asks for {value!r}"}]
            )
        raw[key] = value

    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigValidationError(_field_errors(exc)) from exc

    eps = resolve_epsilon(config.eps, config.s, config.p, presets)
    config = config.model_copy(update={"eps_resolved": eps})
    logger.debug(f"Parsed {config.command} config, eps={config.eps!r} -> {eps:.6g}")
    return config
