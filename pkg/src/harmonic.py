"""


Гармонические числа порядка m: точные значения, префиксные таблицы
по модулю p^e и проверки семейства Вольстенхольма.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence, Tuple

from errors import NonInvertibleDenominator
from local_field import ExactRational, LocalResidue, PrimeContext, prime_context
from models import CheckResult, Congruence
from utils import Stopwatch, ensure_applicable


logger = logging.getLogger(__name__)


# ======================== ТОЧНЫЕ ЗНАЧЕНИЯ ========================

def pairwise_sum(terms: Sequence[Fraction]) -> Fraction:
    """Сумма дробей делением пополам (знаменатели растут медленнее, чем при свёртке слева)"""
    if not terms:
        return Fraction(0)
    if len(terms) == 1:
        return terms[0]
    mid = len(terms) // 2
    return pairwise_sum(terms[:mid]) + pairwise_sum(terms[mid:])


@lru_cache(maxsize=None)
def harmonic_exact(n: int, m: int = 1) -> ExactRational:
    """
    H_{n,m} = sum_{k=1}^{n} 1/k^m как несократимая дробь; H_{0,m} = 0

    Args:
        n: Верхняя граница (>= 0)
        m: Порядок (>= 1)
    """
    if n < 0 or m < 1:
        raise ValueError(f"Ожидалось n >= 0 и m >= 1, получено n={n}, m={m}")
    return pairwise_sum([Fraction(1, k ** m) for k in range(1, n + 1)])


def harmonic_moment_exact(
    n: int,
    powers: Mapping[int, int],
    k_power: int,
    shifted: bool = False,
) -> ExactRational:
    """
    sum_{k=1}^{n} prod_m H_{k',m}^{a_m} / k^c точно, где k' = k-1 при shifted

    Args:
        n: Верхняя граница суммирования
        powers: Отображение порядок m -> степень a_m
        k_power: Степень c знаменателя k^c
        shifted: Брать H_{k-1,m} вместо H_{k,m}
    """
    running = {m: Fraction(0) for m in powers}
    terms = []
    for k in range(1, n + 1):
        if not shifted:
            for m in running:
                running[m] += Fraction(1, k ** m)
        term = Fraction(1, k ** k_power)
        for m, a in powers.items():
            term *= running[m] ** a
        terms.append(term)
        if shifted:
            for m in running:
                running[m] += Fraction(1, k ** m)
    return pairwise_sum(terms)


# ======================== МОДУЛЬНЫЕ ТАБЛИЦЫ ========================

@dataclass(frozen=True)
class HarmonicTable:
    """Префиксные суммы H_{0,m}, ..., H_{N,m} по модулю p^e"""
    ctx: PrimeContext
    order: int
    residues: Tuple[int, ...]

    @property
    def values(self) -> Tuple[LocalResidue, ...]:
        return tuple(self.ctx.residue(r) for r in self.residues)

    def __getitem__(self, k: int) -> LocalResidue:
        return self.ctx.residue(self.residues[k])

    def __len__(self) -> int:
        return len(self.residues)


@lru_cache(maxsize=512)
def harmonic_table(N: int, m: int, ctx: PrimeContext) -> HarmonicTable:
    """
    Таблица префиксных сумм reduce(1/k^m) для k = 1..N

    Raises:
        NonInvertibleDenominator: если N >= p
    """
    if N < 0 or m < 1:
        raise ValueError(f"Ожидалось N >= 0 и m >= 1, получено N={N}, m={m}")
    if N >= ctx.prime:
        raise NonInvertibleDenominator(f"1/{ctx.prime}^{m} не приводится по модулю {ctx.prime}")

    modulus = ctx.modulus
    residues = [0]
    acc = 0
    for k in range(1, N + 1):
        acc = (acc + ctx.inverse_power(k, m)) % modulus
        residues.append(acc)
    return HarmonicTable(ctx, m, tuple(residues))


def harmonic_moment(
    ctx: PrimeContext,
    n: int,
    powers: Mapping[int, int],
    k_power: int,
    shifted: bool = False,
) -> LocalResidue:
    """
    sum_{k=1}^{n} prod_m H_{k',m}^{a_m} / k^c по модулю p^e (k' = k-1 при shifted)

    Все суммы вида sum H.../k... в проверках считаются этим ядром.
    """
    modulus = ctx.modulus
    tables = {m: harmonic_table(n, m, ctx).residues for m in powers}
    total = 0
    for k in range(1, n + 1):
        index = k - 1 if shifted else k
        term = ctx.inverse_power(k, k_power)
        for m, a in powers.items():
            term = term * pow(tables[m][index], a, modulus) % modulus
        total += term
    return ctx.residue(total)


# ======================== ПРОВЕРКИ ========================

def wolstenholme_suite(p: int, max_order: int = 4) -> CheckResult:
    """
    Обобщённая теорема Вольстенхольма: для p >= m + 3
    H_{p-1,m} = 0 (mod p) при чётном m и (mod p^2) при нечётном

    Args:
        p: Простое >= 7
        max_order: Наибольший проверяемый порядок m
    """
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx = prime_context(p, 2)

    members = []
    for m in range(1, max_order + 1):
        if p < m + 3:
            logger.debug(f"wolstenholme: order {m} needs p >= {m + 3}, skipped at p={p}")
            continue
        value = harmonic_table(p - 1, m, ctx).residues[-1]
        if m % 2:
            members.append(Congruence(label=f"H(p-1,{m}) = 0", lhs=value, rhs=0, modulus=p * p))
        else:
            members.append(Congruence(label=f"H(p-1,{m}) = 0", lhs=value % p, rhs=0, modulus=p))

    return CheckResult(check_id="wolstenholme", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


def reflection_check(p: int) -> CheckResult:
    """H_{p-k} = H_{k-1} (mod p) для k = 1..p-1, включая k = p-1 (H_0 = 0)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx = prime_context(p, 1)
    h = harmonic_table(p - 1, 1, ctx).residues

    members = [
        Congruence(label=f"k={k}", lhs=h[p - k], rhs=h[k - 1], modulus=p)
        for k in range(1, p)
    ]
    return CheckResult(check_id="reflection", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


def binomial_expansion_check(p: int) -> CheckResult:
    """
    (-1)^k C(p-1,k) = 1 - p H_k + (p^2/2)(H_k^2 - H_{k,2}) (mod p^3), k = 1..p-1

    Биномиальный коэффициент накапливается по модулю p^3 как
    prod_{i<=k} (p - i) * i^{-1}.
    """
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx = prime_context(p, 3)
    modulus = ctx.modulus
    h1 = harmonic_table(p - 1, 1, ctx).residues
    h2 = harmonic_table(p - 1, 2, ctx).residues
    half = ctx.inverse(2)

    members = []
    binom = 1
    for k in range(1, p):
        binom = binom * (p - k) * ctx.inverse(k) % modulus
        lhs = (-binom if k % 2 else binom) % modulus
        rhs = (1 - p * h1[k] + p * p * half * (h1[k] * h1[k] - h2[k])) % modulus
        members.append(Congruence(label=f"k={k}", lhs=lhs, rhs=rhs, modulus=modulus))
    return CheckResult(check_id="binomial_expansion", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


def doubling_check(p: int) -> CheckResult:
    """2 H_{p-1} = -p H_{p-1,2} (mod p^4)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx = prime_context(p, 4)
    modulus = ctx.modulus
    h1 = harmonic_table(p - 1, 1, ctx).residues[-1]
    h2 = harmonic_table(p - 1, 2, ctx).residues[-1]

    member = Congruence(
        label="2H(p-1) = -p H(p-1,2)",
        lhs=2 * h1 % modulus,
        rhs=-p * h2 % modulus,
        modulus=modulus,
    )
    return CheckResult(check_id="doubling", prime=p, members=[member], elapsed_ms=timer.elapsed_ms())
