"""


Точная рациональная арифметика и кольцо вычетов Z_(p) / p^e.

Дробь m/n со знаменателем, не делящимся на p, отображается в класс m*n'
по модулю p^e, где n' - обратный к n. Класс хранится одним каноническим
целым из [0, p^e), поэтому сравнение по модулю - это сравнение целых.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

from errors import (
    ContextMismatch,
    InsufficientValuation,
    NonInvertible,
    NonInvertibleDenominator,
    UndefinedValuation,
)
from utils import is_prime


# Fraction нормализует дробь при каждом создании: gcd = 1, знаменатель > 0, 0 = 0/1
ExactRational = Fraction


# ======================== ТИПЫ ========================

@dataclass(frozen=True, slots=True)
class LocalResidue:
    """Класс вычетов по модулю p^e"""
    residue: int
    prime: int
    exponent: int

    def __post_init__(self):
        if self.prime < 2 or self.exponent < 1:
            raise ValueError(f"Некорректный контекст: p={self.prime}, e={self.exponent}")
        if not 0 <= self.residue < self.prime ** self.exponent:
            raise ValueError(f"Вычет {self.residue} вне [0, {self.prime}^{self.exponent})")

    @property
    def modulus(self) -> int:
        return self.prime ** self.exponent

    def __add__(self, other: "LocalResidue") -> "LocalResidue":
        return lr_add(self, other)

    def __sub__(self, other: "LocalResidue") -> "LocalResidue":
        return lr_add(self, lr_neg(other))

    def __mul__(self, other: "LocalResidue") -> "LocalResidue":
        return lr_mul(self, other)

    def __neg__(self) -> "LocalResidue":
        return lr_neg(self)

    def __int__(self) -> int:
        return self.residue

    def __repr__(self) -> str:
        return f"{self.residue} (mod {self.prime}^{self.exponent})"


@dataclass(frozen=True)
class PrimeContext:
    """
    Простое p, показатель e и таблица обратных к 1..p-1 по модулю p^e

    Равенство и хеш определяются парой (p, e); таблица только кеш.
    """
    prime: int
    exponent: int
    inverses: Tuple[int, ...] = field(compare=False, repr=False, default=())

    @property
    def modulus(self) -> int:
        return self.prime ** self.exponent

    def residue(self, value: int) -> LocalResidue:
        """Целое число как элемент кольца"""
        return LocalResidue(value % self.modulus, self.prime, self.exponent)

    def inverse(self, k: int) -> int:
        """k^{-1} mod p^e; для 1 <= k <= p-1 берётся из таблицы"""
        if 0 < k < self.prime:
            return self.inverses[k]
        if k % self.prime == 0:
            raise NonInvertible(f"{k} не обратим по модулю {self.prime}^{self.exponent}")
        return pow(k, -1, self.modulus)

    def inverse_power(self, k: int, m: int) -> int:
        """k^{-m} mod p^e"""
        return pow(self.inverse(k), m, self.modulus)


@lru_cache(maxsize=None)
def prime_context(p: int, e: int) -> PrimeContext:
    """
    Построить (или взять из кеша) контекст для (p, e)

    Таблица обратных строится одним расширенным алгоритмом Евклида на k
    (pow(k, -1, m)), один раз на пару (p, e).
    """
    if not is_prime(p):
        raise ValueError(f"{p} не является простым")
    if e < 1:
        raise ValueError(f"Показатель должен быть >= 1, получено {e}")
    modulus = p ** e
    inverses = (0,) + tuple(pow(k, -1, modulus) for k in range(1, p))
    return PrimeContext(p, e, inverses)


# ======================== ОПЕРАЦИИ ========================

def reduce(q: ExactRational, ctx: PrimeContext) -> LocalResidue:
    """
    Класс дроби q по модулю p^e

    Raises:
        NonInvertibleDenominator: если p делит знаменатель q
    """
    q = Fraction(q)
    if q.denominator % ctx.prime == 0:
        raise NonInvertibleDenominator(f"Знаменатель {q} делится на {ctx.prime}")
    modulus = ctx.modulus
    return LocalResidue(q.numerator * ctx.inverse(q.denominator) % modulus, ctx.prime, ctx.exponent)


def _check_context(a: LocalResidue, b: LocalResidue) -> None:
    if a.prime != b.prime or a.exponent != b.exponent:
        raise ContextMismatch(
            f"Разные кольца: {a.prime}^{a.exponent} и {b.prime}^{b.exponent}"
        )


def lr_add(a: LocalResidue, b: LocalResidue) -> LocalResidue:
    _check_context(a, b)
    return LocalResidue((a.residue + b.residue) % a.modulus, a.prime, a.exponent)


def lr_mul(a: LocalResidue, b: LocalResidue) -> LocalResidue:
    _check_context(a, b)
    return LocalResidue(a.residue * b.residue % a.modulus, a.prime, a.exponent)


def lr_neg(a: LocalResidue) -> LocalResidue:
    return LocalResidue(-a.residue % a.modulus, a.prime, a.exponent)


def lr_inv(a: LocalResidue) -> LocalResidue:
    """
    Обратный элемент

    Raises:
        NonInvertible: если p делит вычет
    """
    if a.residue % a.prime == 0:
        raise NonInvertible(f"{a.residue} не обратим по модулю {a.prime}^{a.exponent}")
    return LocalResidue(pow(a.residue, -1, a.modulus), a.prime, a.exponent)


def valuation(q: ExactRational, p: int) -> int:
    """
    p-адическое нормирование ненулевой дроби (отрицательно, если p делит знаменатель)

    Raises:
        UndefinedValuation: для q = 0
        ValueError: если p не простое
    """
    if not is_prime(p):
        raise ValueError(f"{p} не является простым")
    q = Fraction(q)
    if q == 0:
        raise UndefinedValuation("Нормирование нуля не определено")

    def _count(n: int) -> int:
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    return _count(abs(q.numerator)) - _count(q.denominator)


def lift_divide(a: LocalResidue, t: int) -> LocalResidue:
    """
    Разделить вычет по модулю p^{e+t} на p^t, результат по модулю p^e

    Raises:
        InsufficientValuation: если p^t не делит вычет
    """
    if t < 1 or a.exponent - t < 1:
        raise ValueError(f"Нельзя разделить на {a.prime}^{t} вычет по модулю {a.prime}^{a.exponent}")
    divisor = a.prime ** t
    if a.residue % divisor:
        raise InsufficientValuation(f"{a.prime}^{t} не делит {a.residue}")
    # residue < p^{e+t}, поэтому частное уже меньше p^e
    return LocalResidue(a.residue // divisor, a.prime, a.exponent - t)
