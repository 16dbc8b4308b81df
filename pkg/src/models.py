"""


Модели данных проверок: описатели, сравнения, результаты, отчёт прогона.
Использует Pydantic для типизации и валидации.
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


# Вычет (int) в модульных проверках, точная дробь в беспростых
MemberValue = Union[int, Fraction]


# ======================== ENUMS ========================

class OutputFormat(str, Enum):
    """Формат отчёта"""
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


# ======================== ОСНОВНЫЕ МОДЕЛИ ========================

class CheckDescriptor(BaseModel):
    """Зарегистрированное утверждение"""
    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="Стабильный идентификатор")
    description: str = Field(..., description="Что проверяется")
    paper_anchor: str = Field(..., description="Ссылка на утверждение: лемма, номер формулы")
    anchor: str = Field(..., description="Формулировка сравнения")
    modulus_exponent: Optional[int] = Field(default=None, ge=1, description="Показатель модуля; None - точное тождество")
    min_prime: int = Field(default=7, ge=7, description="Нижняя граница применимости")
    max_prime: Optional[int] = Field(default=None, description="Верхняя граница (границы перебора)")
    prime_free: bool = Field(default=False, description="Проверка тождества при n = p - 1")

    def applies_to(self, prime: int) -> bool:
        if prime < self.min_prime:
            return False
        return self.max_prime is None or prime <= self.max_prime


class Congruence(BaseModel):
    """Одно сравнение lhs = rhs по модулю modulus (None - точное равенство)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    lhs: MemberValue
    rhs: MemberValue
    modulus: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


class CheckResult(BaseModel):
    """Результат одной проверки при одном p"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    check_id: str
    prime: Optional[int] = None
    members: List[Congruence] = Field(..., min_length=1)
    oracle_checked: bool = False
    elapsed_ms: float = Field(default=0.0, ge=0)

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    @property
    def lhs(self) -> List[MemberValue]:
        return [m.lhs for m in self.members]

    @property
    def rhs(self) -> List[MemberValue]:
        return [m.rhs for m in self.members]

    @property
    def modulus(self) -> List[Optional[int]]:
        return [m.modulus for m in self.members]

    @property
    def sort_key(self):
        return (self.prime or 0, self.check_id)

    def failing_members(self) -> List[Congruence]:
        return [m for m in self.members if not m.holds]

    def mutated(self) -> "CheckResult":
        """Копия с первым lhs, сдвинутым на +1 (самопроверка харнесса)"""
        first = self.members[0]
        shifted = first.lhs + 1
        if first.modulus is not None:
            shifted %= first.modulus
        members = [first.model_copy(update={'lhs': shifted})] + list(self.members[1:])
        return self.model_copy(update={'members': members})

    def to_record(self, timing: bool = True) -> Dict[str, Any]:
        """Запись отчёта с полями в фиксированном порядке"""
        return {
            'check_id': self.check_id,
            'prime': self.prime,
            'modulus': self.modulus,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'pass': self.passed,
            'oracle_checked': self.oracle_checked,
            'elapsed_ms': round(self.elapsed_ms, 3) if timing else 0,
        }


class CheckOptions(BaseModel):
    """Параметры, передаваемые каждой проверке (в том числе в процессы пула)"""
    model_config = ConfigDict(frozen=True)

    oracle: bool = Field(default=False, description="Сверять быстрые суммы с перебором")
    wolstenholme_max_order: int = Field(default=4, ge=1)


class SkippedPair(BaseModel):
    """Пара (проверка, p), вне границ применимости"""
    check_id: str
    prime: int
    reason: str


class RegistryReport(BaseModel):
    """Итог прогона реестра"""
    results: List[CheckResult] = Field(default_factory=list)
    skipped: List[SkippedPair] = Field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]
