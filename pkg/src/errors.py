"""


Иерархия исключений проверяльщика сравнений.
"""


class HarmonicCheckError(Exception):
    """Базовое исключение проекта"""


# ======================== АРИФМЕТИКА ========================

class ArithmeticFailure(HarmonicCheckError, ArithmeticError):
    """Операция не определена в кольце вычетов"""


class NonInvertibleDenominator(ArithmeticFailure):
    """Знаменатель дроби делится на p"""


class NonInvertible(ArithmeticFailure):
    """Вычет не обратим по модулю p^e"""


class ContextMismatch(ArithmeticFailure):
    """Операнды из разных колец (p, e)"""


class UndefinedValuation(ArithmeticFailure):
    """p-адическое нормирование нуля"""


class InsufficientValuation(ArithmeticFailure):
    """Вычет не делится на p^t"""


class VonStaudtPole(ArithmeticFailure):
    """Знаменатель B_k делится на p (теорема фон Штаудта-Клаузена)"""


# ======================== ИСПОЛЬЗОВАНИЕ ========================

class UsageError(HarmonicCheckError, ValueError):
    """Некорректные аргументы или конфигурация"""


class OutOfApplicabilityRange(UsageError):
    """Проверка не применима к данному p (или n)"""


class OracleBoundExceeded(UsageError):
    """Перебор слишком велик для оракула"""


class UnknownCheckId(UsageError):
    """Идентификатор проверки не зарегистрирован"""


class BadRange(UsageError):
    """Некорректный диапазон простых"""
