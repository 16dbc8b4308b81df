"""


Числа Бернулли: точные значения по рекурренте и приведение по модулю p^e.
"""

import logging
import math
from fractions import Fraction
from typing import Sequence, Tuple

from errors import VonStaudtPole
from local_field import ExactRational, LocalResidue, PrimeContext, reduce


logger = logging.getLogger(__name__)


class BernoulliCache:
    """
    Монотонно растущий кеш B_0..B_K

    B_k находится из sum_{j=0}^{k} C(k+1, j) B_j = 0 (k >= 1), что
    равносильно производящей функции x / (e^x - 1). Сумма копится в целых
    над общим знаменателем (НОК знаменателей уже найденных B_j).
    """

    def __init__(self):
        self._values = [Fraction(1), Fraction(-1, 2)]
        self._denominator_lcm = 2

    def __len__(self) -> int:
        return len(self._values)

    @property
    def values(self) -> Tuple[Fraction, ...]:
        return tuple(self._values)

    def extend_to(self, K: int) -> None:
        """Досчитать значения до B_K включительно"""
        start = len(self._values)
        if K < start:
            return

        for k in range(start, K + 1):
            if k % 2:
                self._values.append(Fraction(0))
                continue
            common = self._denominator_lcm
            total = 0
            binom = 1  # C(k+1, j)
            for j, b in enumerate(self._values):
                if b:
                    total += binom * b.numerator * (common // b.denominator)
                binom = binom * (k + 1 - j) // (j + 1)
            value = Fraction(-total, (k + 1) * common)
            self._values.append(value)
            self._denominator_lcm = math.lcm(self._denominator_lcm, value.denominator)

        logger.debug(f"Bernoulli cache extended from B_{start - 1} to B_{K}")

    def get(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError(f"Индекс числа Бернулли должен быть >= 0, получено {k}")
        self.extend_to(k)
        return self._values[k]

    def seed(self, values: Sequence[Fraction]) -> None:
        """Принять готовые значения (например, посчитанные родительским процессом)"""
        if len(values) > len(self._values):
            self._values = list(values)
            self._denominator_lcm = math.lcm(*(v.denominator for v in values))


_CACHE = BernoulliCache()


def bernoulli_exact(k: int) -> ExactRational:
    """B_k (соглашение B_1 = -1/2)"""
    return _CACHE.get(k)


def precompute_bernoulli(K: int) -> Tuple[Fraction, ...]:
    """Заполнить кеш до B_K и вернуть снимок для передачи в процессы-воркеры"""
    _CACHE.extend_to(K)
    return _CACHE.values


def seed_bernoulli(values: Sequence[Fraction]) -> None:
    _CACHE.seed(values)


def is_von_staudt_pole(k: int, p: int) -> bool:
    """p делит знаменатель B_k ровно когда k чётно, k > 0 и (p - 1) | k"""
    return k > 0 and k % 2 == 0 and k % (p - 1) == 0


def bernoulli_mod(k: int, ctx: PrimeContext) -> LocalResidue:
    """
    B_k по модулю p^e

    Raises:
        VonStaudtPole: если (p - 1) | k для чётного k > 0
    """
    if is_von_staudt_pole(k, ctx.prime):
        raise VonStaudtPole(f"{ctx.prime} делит знаменатель B_{k}")
    return reduce(bernoulli_exact(k), ctx)


def bernoulli_convolution(n: int) -> ExactRational:
    """sum_{j=0}^{n} B_j B_{n-j}"""
    _CACHE.extend_to(n)
    return sum((bernoulli_exact(j) * bernoulli_exact(n - j) for j in range(n + 1)), Fraction(0))
