"""Tests for configuration loading and run-config merging."""

import pytest
import yaml
from pydantic import ValidationError

from config import (
    ENV_JOBS,
    ENV_LOG_LEVEL,
    AppConfig,
    ConfigManager,
    RunConfig,
    build_run_config,
)
from errors import BadRange
from models import OutputFormat


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(ENV_JOBS, raising=False)
    monkeypatch.delenv(ENV_LOG_LEVEL, raising=False)


def write_config(tmp_path, data):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(data), encoding='utf-8')
    return str(path)


def test_missing_file_gives_defaults(tmp_path):
    config = ConfigManager.load(str(tmp_path / "absent.yaml"))
    assert config.verify.primes == "7..499"
    assert config.verify.checks == ["all"]
    assert config.verify.format == OutputFormat.TEXT
    assert config.verify.jobs is None
    assert config.checks.wolstenholme_max_order == 4
    assert config.logging.level == "INFO"


def test_load_values(tmp_path):
    path = write_config(tmp_path, {
        'verify': {'primes': "7..31", 'format': "json", 'jobs': 3, 'oracle': True, 'timing': False},
        'checks': {'wolstenholme_max_order': 6},
        'logging': {'level': "debug"},
    })
    config = ConfigManager.load(path)
    assert config.verify.primes == "7..31"
    assert config.verify.format == OutputFormat.JSON
    assert config.verify.jobs == 3
    assert config.verify.oracle and not config.verify.timing
    assert config.checks.wolstenholme_max_order == 6
    assert config.logging.level == "DEBUG"


def test_config_is_cached(tmp_path):
    path = write_config(tmp_path, {'verify': {'jobs': 2}})
    first = ConfigManager.load(path)
    assert ConfigManager.load("elsewhere.yaml") is first
    assert ConfigManager.get() is first


def test_get_before_load():
    with pytest.raises(RuntimeError):
        ConfigManager.get()


@pytest.mark.parametrize("data", [
    {'verify': {'jobs': 0}},
    {'verify': {'primes': "13..7"}},
    {'verify': {'checks': []}},
    {'verify': {'format': "xml"}},
    {'checks': {'wolstenholme_max_order': 0}},
    {'logging': {'level': "LOUD"}},
])
def test_invalid_values(tmp_path, data):
    with pytest.raises(ValidationError):
        ConfigManager.load(write_config(tmp_path, data))


def test_invalid_yaml(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("verify: [unclosed\n", encoding='utf-8')
    with pytest.raises(yaml.YAMLError):
        ConfigManager.load(str(path))


def test_environment_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_JOBS, "5")
    monkeypatch.setenv(ENV_LOG_LEVEL, "warning")
    config = ConfigManager.load(write_config(tmp_path, {'verify': {'jobs': 2}}))
    assert config.verify.jobs == 5
    assert config.logging.level == "WARNING"


def test_bad_environment_value(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_JOBS, "zero")
    with pytest.raises(ValidationError):
        ConfigManager.load(str(tmp_path / "absent.yaml"))


def test_build_run_config_defaults():
    run = build_run_config(AppConfig())
    assert run.prime_range == (7, 499)
    assert run.check_ids == ["all"]
    assert run.jobs >= 1
    assert run.timing and not run.mutate


def test_build_run_config_overrides():
    config = AppConfig()
    config.verify.jobs = 4
    run = build_run_config(config, primes="11..13", format="csv", check_ids=["remarks"], timing=False, oracle=None)
    assert run.prime_range == (11, 13)
    assert run.format == OutputFormat.CSV
    assert run.check_ids == ["remarks"]
    assert run.jobs == 4
    assert not run.timing
    assert not run.oracle


def test_build_run_config_bad_range():
    with pytest.raises(BadRange):
        build_run_config(AppConfig(), primes="13..7")


def test_run_config_invariants():
    with pytest.raises(ValidationError):
        RunConfig(prime_range=(13, 7))
    with pytest.raises(ValidationError):
        RunConfig(jobs=0)
