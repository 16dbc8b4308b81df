"""


Модуль для загрузки и валидации конфигурации из YAML файла.
Использует Pydantic для типизации и валидации, python-dotenv для
переопределений из окружения.
"""

import logging
import os
from pathlib import Path
from typing import List, Optional, Tuple

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from errors import UsageError
from models import OutputFormat
from utils import parse_prime_range


logger = logging.getLogger(__name__)


ENV_JOBS = "HARMCHECK_JOBS"
ENV_LOG_LEVEL = "HARMCHECK_LOG_LEVEL"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


# ======================== PYDANTIC МОДЕЛИ ========================

class VerifyConfig(BaseModel):
    """Параметры прогона verify по умолчанию"""
    primes: str = Field(default="7..499", description="Диапазон простых lo..hi")
    checks: List[str] = Field(default=["all"], description="Идентификаторы проверок или all")
    format: OutputFormat = Field(default=OutputFormat.TEXT, description="text, json или csv")
    jobs: Optional[int] = Field(default=None, ge=1, description="Процессов; None - по числу CPU")
    oracle: bool = Field(default=False, description="Сверка с перебором в его границах")
    timing: bool = Field(default=True, description="Писать elapsed_ms")
    output: Optional[str] = Field(default=None, description="Файл отчёта; None - stdout")

    @field_validator('primes')
    @classmethod
    def validate_primes(cls, v):
        parse_prime_range(v)
        return v

    @field_validator('checks')
    @classmethod
    def validate_checks(cls, v):
        if not v:
            raise ValueError("Должна быть указана хотя бы одна проверка")
        return v


class ChecksConfig(BaseModel):
    """Параметры отдельных проверок"""
    wolstenholme_max_order: int = Field(default=4, ge=1, description="Наибольший порядок m")


class LoggingConfig(BaseModel):
    """Конфигурация логирования"""
    level: str = Field(default="INFO")
    file: Optional[str] = Field(default=None, description="Файл логов")

    @field_validator('level')
    @classmethod
    def validate_level(cls, v):
        v = str(v).upper()
        if v not in LOG_LEVELS:
            raise ValueError(f"Уровень логирования должен быть одним из {', '.join(LOG_LEVELS)}")
        return v


class AppConfig(BaseModel):
    """Главная конфигурация приложения"""
    model_config = ConfigDict(validate_assignment=True)

    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    checks: ChecksConfig = Field(default_factory=ChecksConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


class RunConfig(BaseModel):
    """Итоговые параметры одного прогона verify (конфиг + флаги CLI)"""
    model_config = ConfigDict(frozen=True)

    prime_range: Tuple[int, int] = Field(default=(7, 499))
    check_ids: List[str] = Field(default=["all"])
    format: OutputFormat = OutputFormat.TEXT
    jobs: int = Field(default=1, ge=1)
    oracle: bool = False
    timing: bool = True
    output: Optional[str] = None
    wolstenholme_max_order: int = Field(default=4, ge=1)
    mutate: bool = False
    seed: Optional[int] = None

    @model_validator(mode='after')
    def validate_range(self):
        lo, hi = self.prime_range
        if lo < 2 or lo > hi:
            raise ValueError(f"Некорректный диапазон простых: {lo}..{hi}")
        return self


# ======================== ЗАГРУЗЧИК КОНФИГУРАЦИИ ========================

class ConfigManager:
    """Менеджер конфигурации с кешированием"""

    _instance: Optional['ConfigManager'] = None
    _config: Optional[AppConfig] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigManager, cls).__new__(cls)
        return cls._instance

    @classmethod
    def load(cls, config_path: str = "config.yaml") -> AppConfig:
        """
        Загрузить конфигурацию из YAML файла и применить переменные окружения

        Args:
            config_path: Путь к файлу конфигурации

        Returns:
            AppConfig: Объект конфигурации
        """
        manager = cls()

        if manager._config is not None:
            logger.debug("Возвращение кешированной конфигурации")
            return manager._config

        config_file = Path(config_path)

        if not config_file.exists():
            logger.warning(f"Файл {config_path} не найден. Используется конфигурация по умолчанию.")
            raw_config = {}
        else:
            try:
                with open(config_file, 'r', encoding='utf-8') as f:
                    raw_config = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                logger.error(f"Ошибка парсинга YAML: {e}")
                raise
            logger.debug(f"Загружена конфигурация из {config_path}")

        try:
            config = AppConfig(**raw_config)
            apply_env_overrides(config)
        except ValidationError as e:
            logger.error(f"Ошибка валидации конфигурации: {e}")
            raise

        manager._config = config
        logger.debug("Конфигурация успешно загружена и валидирована")
        return manager._config

    @classmethod
    def get(cls) -> AppConfig:
        """Получить загруженную конфигурацию"""
        manager = cls()
        if manager._config is None:
            raise RuntimeError("Конфигурация не загружена. Вызовите load() сначала.")
        return manager._config

    @classmethod
    def reset(cls):
        """Очистить кеш (для тестирования)"""
        cls._instance = None
        cls._config = None


def apply_env_overrides(config: AppConfig) -> AppConfig:
    """
    Переопределить jobs и уровень логов из окружения (.env подхватывается)

    Raises:
        ValidationError: при недопустимом значении переменной
    """
    load_dotenv()

    jobs = os.getenv(ENV_JOBS)
    if jobs:
        config.verify = VerifyConfig.model_validate({**config.verify.model_dump(), 'jobs': jobs})
        logger.debug(f"{ENV_JOBS}={jobs} переопределяет verify.jobs")

    level = os.getenv(ENV_LOG_LEVEL)
    if level:
        config.logging = LoggingConfig.model_validate({**config.logging.model_dump(), 'level': level})
        logger.debug(f"{ENV_LOG_LEVEL}={level} переопределяет logging.level")

    return config


def build_run_config(config: AppConfig, **overrides) -> RunConfig:
    """
    Слить конфигурацию с флагами CLI (None во флаге - взять из конфига)

    Raises:
        UsageError: при некорректном диапазоне или параметрах
    """
    verify = config.verify
    values = {
        'primes': verify.primes,
        'check_ids': verify.checks,
        'format': verify.format,
        'jobs': verify.jobs or os.cpu_count() or 1,
        'oracle': verify.oracle,
        'timing': verify.timing,
        'output': verify.output,
        'wolstenholme_max_order': config.checks.wolstenholme_max_order,
        'mutate': False,
        'seed': None,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})

    primes = values.pop('primes')
    try:
        return RunConfig(prime_range=parse_prime_range(primes), **values)
    except ValidationError as e:
        raise UsageError(f"Некорректные параметры прогона: {e.errors()[0]['msg']}") from e
