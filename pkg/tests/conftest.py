import json
from pathlib import Path

import numpy as np
import pytest

from sbpdiss.cli import ExperimentConfig, parse_config
from sbpdiss.core.settings import get_settings

SEED = 20240607


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def settings():
    return get_settings()


@pytest.fixture
def make_config(settings):
    """Validated ExperimentConfig from keyword fields, as the CLI would parse them."""

    def build(**fields) -> ExperimentConfig:
        return parse_config(json.dumps(fields), settings.presets)

    return build


@pytest.fixture
def write_config(tmp_path: Path):
    def write(**fields) -> Path:
        path = tmp_path / "config.json"
        path.write_text(json.dumps(fields), encoding="utf-8")
        return path

    return write
