import pytest

from sbpdiss.core.settings import get_settings


@pytest.fixture
def fresh_settings():
    get_settings.cache_clear()
    yield get_settings
    get_settings.cache_clear()


def test_defaults_from_app_config(fresh_settings):
    settings = fresh_settings()
    assert settings.output.directory == "results"
    assert settings.output.float_digits == 17
    assert settings.solver.rtol == 1e-11
    assert settings.solver.complex_step == 1e-30
    assert settings.verify.samples == 1000
    assert settings.presets.se_khi == [0.01, 0.004, 0.002, 0.0008, 0.0004, 0.0002]
    assert settings.presets.se_khi_first_degree == 3


def test_environment_overrides(fresh_settings, monkeypatch):
    monkeypatch.setenv("SBPDISS_LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("SBPDISS_OUTPUT_DIR", "/tmp/sbpdiss-results")
    settings = fresh_settings()
    assert settings.logging.level == "DEBUG"
    assert settings.output.directory == "/tmp/sbpdiss-results"


def test_settings_are_cached(fresh_settings):
    assert fresh_settings() is fresh_settings()
