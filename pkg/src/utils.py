"""


Утилиты: логирование, простые числа, разбор диапазонов, замер времени.
"""

import logging
import math
import re
import sys
import time
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from colorama import Fore, Style, just_fix_windows_console

from errors import BadRange, OutOfApplicabilityRange


# ======================== ЛОГИРОВАНИЕ ========================

class ColoredFormatter(logging.Formatter):
    """Форматер консоли с цветом уровня"""

    COLORS = {
        'DEBUG': Fore.CYAN,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.MAGENTA,
    }
    RESET = Style.RESET_ALL

    def format(self, record):
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


def setup_logging(level: int = logging.INFO, log_file: Optional[str] = None) -> None:
    """
    Настроить логирование в stderr и (опционально) файл

    stdout занят отчётом, поэтому консольный хендлер пишет в stderr.
    Повторный вызов заменяет хендлеры, а не добавляет новые.

    Args:
        level: Уровень логирования
        log_file: Путь к файлу логов или None
    """
    just_fix_windows_console()
    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
        handler.close()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    if sys.stderr.isatty():
        console_handler.setFormatter(ColoredFormatter(log_format))
    else:
        console_handler.setFormatter(logging.Formatter(log_format))
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(log_format))
        root_logger.addHandler(file_handler)


# ======================== ПРОСТЫЕ ЧИСЛА ========================

def _sieve_mask(hi: int) -> np.ndarray:
    """Булева маска простоты для 0..hi (решето Эратосфена на numpy)"""
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(hi) + 1):
        if sieve[p]:
            sieve[p * p: hi + 1: p] = False
    return sieve


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Проверить простоту по тому же решету, что и sieve_primes"""
    return n >= 2 and bool(_sieve_mask(n)[n])


def sieve_primes(lo: int, hi: int) -> List[int]:
    """
    Все простые из отрезка [lo, hi] по возрастанию

    Args:
        lo: Нижняя граница (>= 2)
        hi: Верхняя граница (>= lo)

    Returns:
        Список простых

    Raises:
        BadRange: если не выполнено 2 <= lo <= hi
    """
    if lo < 2 or hi < lo:
        raise BadRange(f"Некорректный диапазон простых: {lo}..{hi}")
    return [int(p) for p in np.flatnonzero(_sieve_mask(hi)[lo:]) + lo]


_RANGE_PATTERN = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$")


def parse_prime_range(text: str) -> Tuple[int, int]:
    """
    Разобрать диапазон вида "lo..hi" (или одно число "p")

    Raises:
        BadRange: при неверном формате или lo > hi
    """
    match = _RANGE_PATTERN.match(text or "")
    if not match:
        raise BadRange(f"Ожидался диапазон вида lo..hi, получено: {text!r}")
    lo = int(match.group(1))
    hi = int(match.group(2)) if match.group(2) is not None else lo
    if lo < 2 or hi < lo:
        raise BadRange(f"Некорректный диапазон простых: {lo}..{hi}")
    return lo, hi


def ensure_applicable(p: int, min_prime: int = 7, max_prime: Optional[int] = None) -> None:
    """
    Проверить, что p простое и лежит в границах применимости утверждения

    Raises:
        OutOfApplicabilityRange: если p составное или вне [min_prime, max_prime]
    """
    if not is_prime(p):
        raise OutOfApplicabilityRange(f"{p} не является простым")
    if p < min_prime:
        raise OutOfApplicabilityRange(f"Утверждение требует p >= {min_prime}, получено p = {p}")
    if max_prime is not None and p > max_prime:
        raise OutOfApplicabilityRange(f"Утверждение проверяется только при p <= {max_prime}, получено p = {p}")


# ======================== ВРЕМЕННЫЕ УТИЛИТЫ ========================

def format_duration(seconds: float) -> str:
    """Форматировать длительность в читаемый формат"""
    if seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = seconds / 60
        return f"{minutes:.1f}m"
    else:
        hours = seconds / 3600
        return f"{hours:.1f}h"


class Stopwatch:
    """Замер времени выполнения одной проверки (в миллисекундах)"""

    def __init__(self):
        self._start = time.perf_counter()

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self._start) * 1000.0


# ======================== СТАТИСТИКА ========================

class RunStatistics:
    """Класс для сбора статистики прогона реестра"""

    def __init__(self):
        self._stopwatch = Stopwatch()
        self.primes_scanned = 0
        self.records = 0
        self.failed = 0
        self.skipped = 0

    def finalize(self) -> Dict[str, Any]:
        """Получить финальную статистику"""
        return {
            'duration_formatted': format_duration(self._stopwatch.elapsed_ms() / 1000.0),
            'primes_scanned': self.primes_scanned,
            'records': self.records,
            'failed': self.failed,
            'skipped': self.skipped,
        }
