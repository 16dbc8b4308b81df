"""


Реестр проверяемых утверждений и их параллельный прогон по простым.

Каждая проверка пересчитывает свои суммы из общих таблиц в том показателе,
который требует её модуль; вычеты между разными показателями не переиспользуются.
"""

import asyncio
import itertools
import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Awaitable, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from bernoulli import bernoulli_convolution, bernoulli_mod, precompute_bernoulli, seed_bernoulli
from errors import OracleBoundExceeded, OutOfApplicabilityRange, UnknownCheckId
from harmonic import (
    binomial_expansion_check,
    doubling_check,
    harmonic_exact,
    harmonic_moment,
    harmonic_moment_exact,
    harmonic_table,
    reflection_check,
    wolstenholme_suite,
)
from local_field import lift_divide, prime_context, reduce
from models import CheckDescriptor, CheckOptions, CheckResult, Congruence, RegistryReport, SkippedPair
from multi_harmonic import (
    A_SPEC,
    B_SPEC,
    ORACLE_MAX_N,
    MhsAudit,
    newton_identity_check,
    quadruple_check,
    triple_relations_check,
)
from utils import Stopwatch, ensure_applicable, is_prime


logger = logging.getLogger(__name__)


HERNANDEZ_MAX_N = 25
HERNANDEZ_MAX_M = 4


# ======================== ТОЧНЫЕ ТОЖДЕСТВА ========================

@lru_cache(maxsize=None)
def nondecreasing_sum(k: int, m: int) -> Fraction:
    """
    sum_{1 <= i_1 <= ... <= i_m = k} 1/(i_1 ... i_m)

    Наборы перебираются потоком (последняя координата закреплена равной k),
    члены копятся как целые над общим знаменателем lcm(1..k)^m.
    """
    common = math.lcm(*range(1, k + 1)) ** m
    total = 0
    for head in itertools.combinations_with_replacement(range(1, k + 1), m - 1):
        total += common // (math.prod(head) * k)
    return Fraction(total, common)


def hernandez_check(n: int, m: int) -> CheckResult:
    """
    sum_{k=1}^{n} C(n,k) (-1)^{k-1} sum_{1<=i_1<=...<=i_m=k} 1/(i_1...i_m) = H_{n,m} точно

    Raises:
        OracleBoundExceeded: при n > 25 или m > 4
    """
    if n < 1 or m < 1:
        raise OutOfApplicabilityRange(f"Тождество определено при n, m >= 1, получено n={n}, m={m}")
    if n > HERNANDEZ_MAX_N or m > HERNANDEZ_MAX_M:
        raise OracleBoundExceeded(
            f"Перебор ограничен n <= {HERNANDEZ_MAX_N}, m <= {HERNANDEZ_MAX_M}; получено n={n}, m={m}"
        )
    timer = Stopwatch()

    lhs = sum(
        (math.comb(n, k) * (-1) ** (k - 1) * nondecreasing_sum(k, m) for k in range(1, n + 1)),
        Fraction(0),
    )
    member = Congruence(label=f"m={m}", lhs=lhs, rhs=harmonic_exact(n, m))
    return CheckResult(check_id="hernandez", members=[member], elapsed_ms=timer.elapsed_ms())


def identity_21_check(n: int) -> CheckResult:
    """sum_{k<=n} H_k^2/k - sum_{k<=n} H_k/k^2 = (H_n^3 - H_{n,3}) / 3 точно"""
    if n < 1:
        raise OutOfApplicabilityRange(f"Тождество проверяется при n >= 1, получено n = {n}")
    timer = Stopwatch()

    lhs = harmonic_moment_exact(n, {1: 2}, 1) - harmonic_moment_exact(n, {1: 1}, 2)
    rhs = (harmonic_exact(n, 1) ** 3 - harmonic_exact(n, 3)) / 3
    member = Congruence(label="sum H^2/k - sum H/k^2 = (H^3 - H3)/3", lhs=lhs, rhs=rhs)
    return CheckResult(check_id="identity_21", members=[member], elapsed_ms=timer.elapsed_ms())


# ======================== СРАВНЕНИЯ ПО МОДУЛЮ ========================

def theorem_1_1_check(p: int) -> CheckResult:
    """
    sum H_k/k^2 = sum H_k^2/k = -(3/p^2) H_{p-1} = (3/2p) H_{p-1,2} (mod p^2)

    H_{p-1} берётся по модулю p^4 и делится на p^2, H_{p-1,2} - по модулю
    p^3 и делится на p. Неудачное деление (InsufficientValuation) означает
    нарушение теоремы Вольстенхольма.
    """
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx2 = prime_context(p, 2)
    modulus = ctx2.modulus
    n = p - 1

    first = harmonic_moment(ctx2, n, {1: 1}, 2).residue
    second = harmonic_moment(ctx2, n, {1: 2}, 1).residue
    h1 = lift_divide(harmonic_table(n, 1, prime_context(p, 4))[n], 2)
    third = -3 * h1.residue % modulus
    h2 = lift_divide(harmonic_table(n, 2, prime_context(p, 3))[n], 1)
    fourth = 3 * ctx2.inverse(2) * h2.residue % modulus

    members = [
        Congruence(label="sum H/k^2 = sum H^2/k", lhs=first, rhs=second, modulus=modulus),
        Congruence(label="sum H^2/k = -3H(p-1)/p^2", lhs=second, rhs=third, modulus=modulus),
        Congruence(label="-3H(p-1)/p^2 = 3H(p-1,2)/2p", lhs=third, rhs=fourth, modulus=modulus),
    ]
    return CheckResult(check_id="theorem_1_1", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


def corollary_1_2_check(p: int) -> CheckResult:
    """
    sum H_k^2/k = sum H_k/k^2 = 3(B_{2p-4}/(2p-4) - 2B_{p-3}/(p-3)) (mod p^2)
    и обе суммы = B_{p-3} (mod p)
    """
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx2 = prime_context(p, 2)
    modulus = ctx2.modulus
    n = p - 1

    first = harmonic_moment(ctx2, n, {1: 1}, 2).residue
    second = harmonic_moment(ctx2, n, {1: 2}, 1).residue
    b_long = bernoulli_mod(2 * p - 4, ctx2).residue
    b_short = bernoulli_mod(p - 3, ctx2).residue
    closed_form = 3 * (b_long * ctx2.inverse(2 * p - 4) - 2 * b_short * ctx2.inverse(p - 3)) % modulus

    members = [
        Congruence(label="sum H^2/k = sum H/k^2", lhs=second, rhs=first, modulus=modulus),
        Congruence(label="sum H/k^2 = 3(B(2p-4)/(2p-4) - 2B(p-3)/(p-3))", lhs=first, rhs=closed_form, modulus=modulus),
        Congruence(label="sum H^2/k = B(p-3)", lhs=second % p, rhs=b_short % p, modulus=p),
        Congruence(label="sum H/k^2 = B(p-3)", lhs=first % p, rhs=b_short % p, modulus=p),
    ]
    return CheckResult(check_id="corollary_1_2", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


def lemma_2_3_check(p: int) -> CheckResult:
    """Суммы H_{k-1}/k^3, H_k/k^3, H_{k-1,3}/k, H_{k,3}/k и связь H^3/k с H^2/k^2 (до p - 1)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx1 = prime_context(p, 1)
    ctx2 = prime_context(p, 2)
    n = p - 1

    cubic = harmonic_moment(ctx1, n, {1: 3}, 1).residue
    square_square = harmonic_moment(ctx1, n, {1: 2}, 2).residue
    three_halves = 3 * ctx1.inverse(2) * square_square % p

    members = [
        Congruence(label="sum H(k-1)/k^3 = 0", lhs=harmonic_moment(ctx1, n, {1: 1}, 3, shifted=True).residue, rhs=0, modulus=p),
        Congruence(label="sum H/k^3 = 0", lhs=harmonic_moment(ctx1, n, {1: 1}, 3).residue, rhs=0, modulus=p),
        Congruence(label="sum H^3/k = (3/2) sum H^2/k^2", lhs=cubic, rhs=three_halves, modulus=p),
        Congruence(label="sum H(k-1,3)/k = 0", lhs=harmonic_moment(ctx1, n, {3: 1}, 1, shifted=True).residue, rhs=0, modulus=p),
        Congruence(label="sum H(k,3)/k = 0", lhs=harmonic_moment(ctx1, n, {3: 1}, 1).residue, rhs=0, modulus=p),
        Congruence(
            label="sum H/k^2 = sum H^2/k",
            lhs=harmonic_moment(ctx2, n, {1: 1}, 2).residue,
            rhs=harmonic_moment(ctx2, n, {1: 2}, 1).residue,
            modulus=p * p,
        ),
    ]
    return CheckResult(check_id="lemma_2_3", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


def lemma_2_4_check(p: int, oracle: bool = False) -> CheckResult:
    """sum H_k H_{k,2}/k = sum 1/(i j^2 k) + sum 1/(i^2 j k) (mod p)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx1 = prime_context(p, 1)
    audit = MhsAudit(ctx1, oracle)
    n = p - 1

    lhs = harmonic_moment(ctx1, n, {1: 1, 2: 1}, 1).residue
    rhs = (audit(B_SPEC, n) + audit(A_SPEC, n)) % p
    members = [Congruence(label="sum H H2/k = B + A", lhs=lhs, rhs=rhs, modulus=p)] + audit.members
    return CheckResult(
        check_id="lemma_2_4", prime=p, members=members,
        oracle_checked=audit.checked, elapsed_ms=timer.elapsed_ms(),
    )


def lemma_2_6_check(p: int) -> CheckResult:
    """sum H_k H_{k,2}/k = -(3/2) sum H_k^2/k^2 (mod p)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx1 = prime_context(p, 1)
    n = p - 1

    lhs = harmonic_moment(ctx1, n, {1: 1, 2: 1}, 1).residue
    square_square = harmonic_moment(ctx1, n, {1: 2}, 2).residue
    rhs = -3 * ctx1.inverse(2) * square_square % p
    member = Congruence(label="sum H H2/k = -(3/2) sum H^2/k^2", lhs=lhs, rhs=rhs, modulus=p)
    return CheckResult(check_id="lemma_2_6", prime=p, members=[member], elapsed_ms=timer.elapsed_ms())


def lemma_2_8_check(p: int, oracle: bool = False) -> CheckResult:
    """sum H_k^2/k^2 = -sum 1/(i j^2 k) (mod p)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx1 = prime_context(p, 1)
    audit = MhsAudit(ctx1, oracle)
    n = p - 1

    lhs = harmonic_moment(ctx1, n, {1: 2}, 2).residue
    rhs = -audit(B_SPEC, n) % p
    members = [Congruence(label="sum H^2/k^2 = -B", lhs=lhs, rhs=rhs, modulus=p)] + audit.members
    return CheckResult(
        check_id="lemma_2_8", prime=p, members=members,
        oracle_checked=audit.checked, elapsed_ms=timer.elapsed_ms(),
    )


def lemma_2_9_check(p: int) -> CheckResult:
    """sum H_k^2/k^2 = sum H_k H_{k,2}/k = sum H_k^3/k = 0 (mod p)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx1 = prime_context(p, 1)
    n = p - 1

    members = [
        Congruence(label="sum H^2/k^2 = 0", lhs=harmonic_moment(ctx1, n, {1: 2}, 2).residue, rhs=0, modulus=p),
        Congruence(label="sum H H2/k = 0", lhs=harmonic_moment(ctx1, n, {1: 1, 2: 1}, 1).residue, rhs=0, modulus=p),
        Congruence(label="sum H^3/k = 0", lhs=harmonic_moment(ctx1, n, {1: 3}, 1).residue, rhs=0, modulus=p),
    ]
    return CheckResult(check_id="lemma_2_9", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


def remarks_check(p: int) -> CheckResult:
    """
    Свёртка чисел Бернулли и сравнения по модулю p^3:
      sum_{j=0}^{p-3} B_j B_{p-3-j} = 0 (mod p)
      sum H_k^2/k^2 = -sum_j B_j B_{p-3-j} (mod p)
      H_{p-1,3} = -6 p^2 B_{p-5} / 5 (mod p^3)
      sum H_k^2/k - sum H_k/k^2 = 2 p^2 B_{p-5} / 5 (mod p^3)
    """
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx1 = prime_context(p, 1)
    ctx3 = prime_context(p, 3)
    cube = ctx3.modulus
    n = p - 1

    convolution = reduce(bernoulli_convolution(p - 3), ctx1).residue
    square_square = harmonic_moment(ctx1, n, {1: 2}, 2).residue
    b = bernoulli_mod(p - 5, ctx3).residue
    fifth = ctx3.inverse(5)
    h3 = harmonic_table(n, 3, ctx3).residues[-1]
    difference = (harmonic_moment(ctx3, n, {1: 2}, 1).residue - harmonic_moment(ctx3, n, {1: 1}, 2).residue) % cube

    members = [
        Congruence(label="sum B(j)B(p-3-j) = 0", lhs=convolution, rhs=0, modulus=p),
        Congruence(label="sum H^2/k^2 = -sum B(j)B(p-3-j)", lhs=square_square, rhs=-convolution % p, modulus=p),
        Congruence(label="H(p-1,3) = -6p^2 B(p-5)/5", lhs=h3, rhs=-6 * p * p * b * fifth % cube, modulus=cube),
        Congruence(label="sum H^2/k - sum H/k^2 = 2p^2 B(p-5)/5", lhs=difference, rhs=2 * p * p * b * fifth % cube, modulus=cube),
    ]
    return CheckResult(check_id="remarks", prime=p, members=members, elapsed_ms=timer.elapsed_ms())


# ======================== РЕЕСТР ========================

Runner = Callable[[int, CheckOptions], CheckResult]


@dataclass(frozen=True)
class RegisteredCheck:
    descriptor: CheckDescriptor
    runner: Runner


def _with_prime(result: CheckResult, p: int) -> CheckResult:
    return result.model_copy(update={'prime': p})


def _run_hernandez(p: int, options: CheckOptions) -> CheckResult:
    results = [hernandez_check(p - 1, m) for m in range(1, HERNANDEZ_MAX_M + 1)]
    members = [member for result in results for member in result.members]
    return CheckResult(
        check_id="hernandez", prime=p, members=members,
        elapsed_ms=sum(result.elapsed_ms for result in results),
    )


_CHECKS: Sequence[RegisteredCheck] = (
    RegisteredCheck(
        CheckDescriptor(
            id="reflection", modulus_exponent=1,
            paper_anchor="Lemma 2.1, Eq. (8)",
            description="Reflection of harmonic numbers for k = 1..p-1",
            anchor="H_{p-k} ≡ H_{k-1} (mod p)",
        ),
        lambda p, options: reflection_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="binomial_expansion", modulus_exponent=3,
            paper_anchor="Lemma 2.1, Eq. (9)",
            description="Binomial coefficient C(p-1,k) through H_k and H_{k,2}",
            anchor="(-1)^k C(p-1,k) ≡ 1 - pH_k + (p²/2)(H_k² - H_{k,2}) (mod p³)",
        ),
        lambda p, options: binomial_expansion_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="wolstenholme", modulus_exponent=2,
            paper_anchor="Lemma 2.2, Eq. (10)-(11)",
            description="Generalized Wolstenholme theorem for orders 1..max (p >= m+3)",
            anchor="H_{p-1,m} ≡ 0 (mod p) for even m, (mod p²) for odd m",
        ),
        lambda p, options: wolstenholme_suite(p, options.wolstenholme_max_order),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="doubling", modulus_exponent=4,
            paper_anchor="Lemma 2.10, Eq. (50)",
            description="Doubled harmonic number against the quadratic one",
            anchor="2H_{p-1} ≡ -pH_{p-1,2} (mod p⁴)",
        ),
        lambda p, options: doubling_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="lemma_2_3", modulus_exponent=2,
            paper_anchor="Lemma 2.3, Eq. (12)-(15)",
            description="Cubic harmonic sums vanish; H³/k vs H²/k²; H/k² vs H²/k",
            anchor="ΣH_{k-1}/k³ ≡ ΣH_k/k³ ≡ ΣH_{k-1,3}/k ≡ ΣH_{k,3}/k ≡ 0, ΣH_k³/k ≡ (3/2)ΣH_k²/k² (mod p); ΣH_k/k² ≡ ΣH_k²/k (mod p²)",
        ),
        lambda p, options: lemma_2_3_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="lemma_2_4", modulus_exponent=1,
            paper_anchor="Lemma 2.4, Eq. (22)",
            description="Mixed harmonic sum as two triple sums",
            anchor="ΣH_k·H_{k,2}/k ≡ Σ1/(ij²k) + Σ1/(i²jk) (mod p)",
        ),
        lambda p, options: lemma_2_4_check(p, options.oracle),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="lemma_2_6", modulus_exponent=1,
            paper_anchor="Lemma 2.6, Eq. (28)",
            description="Mixed harmonic sum against the squared one",
            anchor="ΣH_k·H_{k,2}/k ≡ -(3/2)ΣH_k²/k² (mod p)",
        ),
        lambda p, options: lemma_2_6_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="triple_relations", modulus_exponent=1,
            paper_anchor="Lemma 2.7, Eq. (35); Remarks, Eq. (49)",
            description="Relations between the three weight-4 triple sums",
            anchor="A ≡ C ≡ -B/2 ≡ 0, B ≡ 0 (mod p); A=Σ1/(i²jk), B=Σ1/(ij²k), C=Σ1/(ijk²)",
        ),
        lambda p, options: triple_relations_check(p, options.oracle),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="quadruple", modulus_exponent=1,
            paper_anchor="Lemma 2.7, Eq. (37)",
            description="Quadruple elementary harmonic sum vanishes",
            anchor="Σ_{i<j<k<l≤p-1} 1/(ijkl) ≡ 0 (mod p)",
        ),
        lambda p, options: quadruple_check(p, options.oracle),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="lemma_2_8", modulus_exponent=1,
            paper_anchor="Lemma 2.8, Eq. (41)",
            description="Squared harmonic sum against the middle-weighted triple sum",
            anchor="ΣH_k²/k² ≡ -Σ1/(ij²k) (mod p)",
        ),
        lambda p, options: lemma_2_8_check(p, options.oracle),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="lemma_2_9", modulus_exponent=1,
            paper_anchor="Lemma 2.9, Eq. (44)-(46)",
            description="Three weight-4 harmonic sums vanish",
            anchor="ΣH_k²/k² ≡ ΣH_k·H_{k,2}/k ≡ ΣH_k³/k ≡ 0 (mod p)",
        ),
        lambda p, options: lemma_2_9_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="theorem_1_1", modulus_exponent=2,
            paper_anchor="Theorem 1.1, Eq. (3)",
            description="Four equal members: two harmonic sums, H_{p-1}/p², H_{p-1,2}/p",
            anchor="ΣH_k/k² ≡ ΣH_k²/k ≡ -(3/p²)H_{p-1} ≡ (3/2p)H_{p-1,2} (mod p²)",
        ),
        lambda p, options: theorem_1_1_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="corollary_1_2", modulus_exponent=2,
            paper_anchor="Corollary 1.2, Eq. (4)-(5)",
            description="Harmonic sums through Bernoulli numbers",
            anchor="ΣH_k²/k ≡ ΣH_k/k² ≡ 3(B_{2p-4}/(2p-4) - 2B_{p-3}/(p-3)) (mod p²), ≡ B_{p-3} (mod p)",
        ),
        lambda p, options: corollary_1_2_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="remarks", modulus_exponent=3,
            paper_anchor="Remarks after Lemma 2.9; closing Remark",
            description="Bernoulli convolution and the mod p³ difference of the two sums",
            anchor="ΣB_jB_{p-3-j} ≡ 0, ΣH_k²/k² ≡ -ΣB_jB_{p-3-j} (mod p); H_{p-1,3} ≡ -6p²B_{p-5}/5, ΣH_k²/k - ΣH_k/k² ≡ 2p²B_{p-5}/5 (mod p³)",
        ),
        lambda p, options: remarks_check(p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="hernandez", prime_free=True, max_prime=HERNANDEZ_MAX_N + 1,
            paper_anchor="Lemma 2.5, Eq. (27)",
            description="Alternating binomial identity for H_{n,m}, n = p-1, m = 1..4",
            anchor="Σ_k C(n,k)(-1)^{k-1} Σ_{i_1≤…≤i_m=k} 1/(i_1…i_m) = H_{n,m}",
        ),
        _run_hernandez,
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="newton_identity", prime_free=True, max_prime=ORACLE_MAX_N + 1,
            paper_anchor="Lemma 2.7, Eq. (36)",
            description="Product of the triple and single sums, n = p-1, by enumeration",
            anchor="(Σ_{i<j<k} 1/ijk)·H_n = A + B + C + 4Σ_{i<j<k<l} 1/ijkl",
        ),
        lambda p, options: _with_prime(newton_identity_check(p - 1), p),
    ),
    RegisteredCheck(
        CheckDescriptor(
            id="identity_21", prime_free=True,
            paper_anchor="Lemma 2.3, Eq. (21)",
            description="Difference of the two harmonic sums, n = p-1, exactly",
            anchor="ΣH_k²/k - ΣH_k/k² = (H_n³ - H_{n,3})/3",
        ),
        lambda p, options: _with_prime(identity_21_check(p - 1), p),
    ),
)

REGISTRY: Dict[str, RegisteredCheck] = {check.descriptor.id: check for check in _CHECKS}


# ======================== ВОРКЕРЫ ========================

def _init_worker(bernoulli_values: Sequence[Fraction]) -> None:
    """Инициализатор процесса пула: принять числа Бернулли от родителя"""
    seed_bernoulli(bernoulli_values)


def _run_task(check_id: str, prime: int, options: CheckOptions) -> CheckResult:
    return REGISTRY[check_id].runner(prime, options)


def _bernoulli_index_needed(primes: Sequence[int], ids: Iterable[str]) -> int:
    if not primes:
        return 0
    ids = set(ids)
    top = max(primes)
    if "corollary_1_2" in ids:
        return 2 * top - 4
    if "remarks" in ids:
        return top - 3
    return 0


ResultCallback = Callable[[CheckResult], Awaitable[None]]


class CheckRegistry:
    """Прогон декартова произведения (проверки) x (применимые простые)"""

    def __init__(self, checks: Optional[Mapping[str, RegisteredCheck]] = None):
        self.checks = dict(checks or REGISTRY)

    def descriptors(self) -> List[CheckDescriptor]:
        return [check.descriptor for check in self.checks.values()]

    def resolve(self, selection: Iterable[str]) -> List[str]:
        """
        Развернуть выбор ("all" или список id) в отсортированный список id

        Raises:
            UnknownCheckId: при незарегистрированном id
        """
        selected = set()
        for check_id in selection:
            if check_id == "all":
                selected.update(self.checks)
            elif check_id in self.checks:
                selected.add(check_id)
            else:
                raise UnknownCheckId(f"Неизвестная проверка: {check_id!r}")
        return sorted(selected)

    def plan(self, primes: Sequence[int], ids: Sequence[str]) -> Tuple[List[Tuple[int, str]], List[SkippedPair]]:
        """Задачи (p, id) в порядке сортировки и явно пропущенные пары"""
        tasks = []
        skipped = []
        for p in sorted(set(primes)):
            if not is_prime(p):
                raise OutOfApplicabilityRange(f"{p} не является простым")
            for check_id in ids:
                descriptor = self.checks[check_id].descriptor
                if descriptor.applies_to(p):
                    tasks.append((p, check_id))
                else:
                    bound = f"{descriptor.min_prime}..{descriptor.max_prime or ''}"
                    skipped.append(SkippedPair(check_id=check_id, prime=p, reason=f"applicable for p in {bound}"))
        return tasks, skipped

    async def run_async(
        self,
        primes: Sequence[int],
        selection: Iterable[str],
        options: Optional[CheckOptions] = None,
        jobs: int = 1,
        on_result: Optional[ResultCallback] = None,
        mutate: Optional[random.Random] = None,
    ) -> RegistryReport:
        """
        Выполнить проверки; результаты отдаются в on_result строго в порядке (p, id)

        Запись отдаётся, как только готовы все записи, которые сортируются
        раньше неё, поэтому прерванный прогон оставляет корректный префикс.

        Args:
            primes: Простые числа
            selection: Идентификаторы проверок или "all"
            options: Параметры проверок
            jobs: Число процессов (1 - без пула)
            on_result: Асинхронный приёмник записей
            mutate: Генератор для самопроверки (+1 к одной случайной записи)
        """
        options = options or CheckOptions()
        ids = self.resolve(selection)
        tasks, skipped = self.plan(primes, ids)
        for pair in skipped:
            logger.debug(f"Skipped {pair.check_id} at p={pair.prime}: {pair.reason}")

        report = RegistryReport(skipped=skipped)
        if not tasks:
            return report

        snapshot = precompute_bernoulli(_bernoulli_index_needed([p for p, _ in tasks], ids))
        mutate_index = mutate.randrange(len(tasks)) if mutate is not None else None
        logger.info(f"Running {len(tasks)} checks ({len(skipped)} skipped) with {jobs} job(s)")

        slots: List[Optional[CheckResult]] = [None] * len(tasks)
        emitted = 0
        loop = asyncio.get_running_loop()
        pool = ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(snapshot,)) if jobs > 1 else None

        async def _execute(index: int, prime: int, check_id: str) -> Tuple[int, CheckResult]:
            if pool is not None:
                result = await loop.run_in_executor(pool, _run_task, check_id, prime, options)
            else:
                result = _run_task(check_id, prime, options)
            if index == mutate_index:
                logger.warning(f"Mutation self-test: perturbing {check_id} at p={prime}")
                result = result.mutated()
            return index, result

        try:
            for next_done in asyncio.as_completed([_execute(i, p, c) for i, (p, c) in enumerate(tasks)]):
                index, result = await next_done
                slots[index] = result
                if not result.passed:
                    logger.warning(f"FAILED {result.check_id} at p={result.prime}: {len(result.failing_members())} member(s)")
                while emitted < len(slots) and slots[emitted] is not None:
                    if on_result is not None:
                        await on_result(slots[emitted])
                    emitted += 1
        finally:
            if pool is not None:
                pool.shutdown(wait=True, cancel_futures=True)

        report.results = [result for result in slots if result is not None]
        logger.info(f"Registry run finished: {len(report.results)} record(s), {len(report.failed)} failed")
        return report

    def run(self, primes: Sequence[int], selection: Iterable[str], **kwargs) -> RegistryReport:
        """Синхронная обёртка над run_async"""
        return asyncio.run(self.run_async(primes, selection, **kwargs))


def run_registry(
    primes: Sequence[int],
    selection: Iterable[str],
    options: Optional[CheckOptions] = None,
    jobs: int = 1,
) -> List[CheckResult]:
    """Результаты проверок (selection) x (применимые primes), упорядоченные по (p, id)"""
    return CheckRegistry().run(primes, selection, options=options, jobs=jobs).results
