"""


Кратные гармонические суммы по строго возрастающим наборам индексов:
быстрый префиксный путь, оракул-перебор и проверки тройных/четверных сумм.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from errors import NonInvertibleDenominator, OracleBoundExceeded, OutOfApplicabilityRange
from harmonic import harmonic_exact
from local_field import ExactRational, LocalResidue, PrimeContext, prime_context, reduce
from models import CheckResult, Congruence
from utils import Stopwatch, ensure_applicable


logger = logging.getLogger(__name__)


ORACLE_MAX_N = 60
ORACLE_MAX_DEPTH = 4

# Границы, при которых --oracle включает сверку автоматически
AUDIT_MAX_N = {1: 60, 2: 60, 3: 60, 4: 30}


@dataclass(frozen=True)
class MhsSpec:
    """Показатели (s_1, ..., s_d) суммы по i_1 < ... < i_d"""
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if not self.exponents:
            raise ValueError("Глубина кратной суммы должна быть >= 1")
        if any(s < 1 for s in self.exponents):
            raise ValueError(f"Показатели должны быть >= 1: {self.exponents}")

    @classmethod
    def of(cls, *exponents: int) -> "MhsSpec":
        return cls(tuple(exponents))

    @classmethod
    def parse(cls, text: str) -> "MhsSpec":
        """Разобрать запись вида "1,2,1" """
        return cls(tuple(int(part) for part in text.split(",") if part.strip()))

    @property
    def depth(self) -> int:
        return len(self.exponents)

    @property
    def weight(self) -> int:
        return sum(self.exponents)

    def reversed(self) -> "MhsSpec":
        return MhsSpec(tuple(reversed(self.exponents)))

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.exponents) + ")"


# ======================== БЫСТРЫЙ ПУТЬ ========================

def mhs(spec: MhsSpec, n: int, ctx: PrimeContext) -> LocalResidue:
    """
    sum_{1 <= i_1 < ... < i_d <= n} prod 1/i_j^{s_j} по модулю p^e за O(d n)

    Слой r: T_r(k) = sum_{j <= k} T_{r-1}(j - 1) / j^{s_r}, T_0 = 1.

    Raises:
        NonInvertibleDenominator: если n >= p
    """
    if n < 0:
        raise ValueError(f"n должно быть >= 0, получено {n}")
    if n >= ctx.prime:
        raise NonInvertibleDenominator(f"Индексы до {n} включают {ctx.prime}")

    modulus = ctx.modulus
    previous = [1] * (n + 1)
    for s in spec.exponents:
        current = [0] * (n + 1)
        acc = 0
        for k in range(1, n + 1):
            acc = (acc + previous[k - 1] * ctx.inverse_power(k, s)) % modulus
            current[k] = acc
        previous = current
    return ctx.residue(previous[n])


# ======================== ОРАКУЛ ========================

def mhs_bruteforce(spec: MhsSpec, n: int) -> ExactRational:
    """
    Точное значение перебором всех строго возрастающих наборов

    Члены суммируются как целые над общим знаменателем lcm(1..n)^{вес}.

    Raises:
        OracleBoundExceeded: при n > 60 или глубине > 4
    """
    if n > ORACLE_MAX_N or spec.depth > ORACLE_MAX_DEPTH:
        raise OracleBoundExceeded(
            f"Перебор ограничен n <= {ORACLE_MAX_N}, d <= {ORACLE_MAX_DEPTH}; получено n={n}, d={spec.depth}"
        )
    if n < 0:
        raise ValueError(f"n должно быть >= 0, получено {n}")

    common = math.lcm(*range(1, n + 1)) ** spec.weight
    total = 0
    for indices in itertools.combinations(range(1, n + 1), spec.depth):
        term = 1
        for i, s in zip(indices, spec.exponents):
            term *= i ** s
        total += common // term
    return Fraction(total, common)


class MhsAudit:
    """
    Источник кратных сумм для проверки: быстрый путь и, при oracle,
    сверка с перебором в пределах AUDIT_MAX_N
    """

    def __init__(self, ctx: PrimeContext, enabled: bool = False):
        self.ctx = ctx
        self.enabled = enabled
        self.members: List[Congruence] = []
        self._all_audited = enabled
        self._cache: Dict[Tuple[MhsSpec, int], int] = {}

    @property
    def checked(self) -> bool:
        return self.enabled and self._all_audited

    def __call__(self, spec: MhsSpec, n: int) -> int:
        key = (spec, n)
        if key in self._cache:
            return self._cache[key]

        fast = mhs(spec, n, self.ctx).residue
        if self.enabled and n <= AUDIT_MAX_N.get(spec.depth, -1):
            oracle = reduce(mhs_bruteforce(spec, n), self.ctx).residue
            if oracle != fast:
                logger.error(f"Fast path disagrees with enumeration for {spec} at n={n}, p={self.ctx.prime}")
            self.members.append(
                Congruence(label=f"oracle {spec}", lhs=fast, rhs=oracle, modulus=self.ctx.modulus)
            )
        else:
            self._all_audited = False

        self._cache[key] = fast
        return fast


# ======================== ПРОВЕРКИ ========================

A_SPEC = MhsSpec.of(2, 1, 1)   # sum 1/(i^2 j k)
B_SPEC = MhsSpec.of(1, 2, 1)   # sum 1/(i j^2 k)
C_SPEC = MhsSpec.of(1, 1, 2)   # sum 1/(i j k^2)
E3_SPEC = MhsSpec.of(1, 1, 1)
E4_SPEC = MhsSpec.of(1, 1, 1, 1)


def newton_identity_check(n: int) -> CheckResult:
    """
    (sum_{i<j<k<=n} 1/ijk) * H_n = A + B + C + 4 sum_{i<j<k<l<=n} 1/ijkl точно

    Raises:
        OutOfApplicabilityRange: при n < 4 (четверная сумма пуста)
        OracleBoundExceeded: при n > 60
    """
    if n < 4:
        raise OutOfApplicabilityRange(f"Тождество проверяется при n >= 4, получено n = {n}")
    if n > ORACLE_MAX_N:
        raise OracleBoundExceeded(f"Перебор ограничен n <= {ORACLE_MAX_N}, получено n = {n}")
    timer = Stopwatch()

    lhs = mhs_bruteforce(E3_SPEC, n) * harmonic_exact(n, 1)
    rhs = (
        mhs_bruteforce(A_SPEC, n)
        + mhs_bruteforce(B_SPEC, n)
        + mhs_bruteforce(C_SPEC, n)
        + 4 * mhs_bruteforce(E4_SPEC, n)
    )
    member = Congruence(label="e3 * H(n) = A + B + C + 4 e4", lhs=lhs, rhs=rhs)
    return CheckResult(
        check_id="newton_identity", members=[member], oracle_checked=True, elapsed_ms=timer.elapsed_ms()
    )


def triple_relations_check(p: int, oracle: bool = False) -> CheckResult:
    """
    A = C, A = -B/2 и A = B = C = 0 (mod p) при n = p - 1

    Попарные соотношения и обнуления проверяются независимо.
    """
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx = prime_context(p, 1)
    audit = MhsAudit(ctx, oracle)

    a = audit(A_SPEC, p - 1)
    b = audit(B_SPEC, p - 1)
    c = audit(C_SPEC, p - 1)
    half_b = -b * ctx.inverse(2) % p

    members = [
        Congruence(label="A = C", lhs=a, rhs=c, modulus=p),
        Congruence(label="A = -B/2", lhs=a, rhs=half_b, modulus=p),
        Congruence(label="A = 0", lhs=a, rhs=0, modulus=p),
        Congruence(label="B = 0", lhs=b, rhs=0, modulus=p),
        Congruence(label="C = 0", lhs=c, rhs=0, modulus=p),
    ] + audit.members
    return CheckResult(
        check_id="triple_relations", prime=p, members=members,
        oracle_checked=audit.checked, elapsed_ms=timer.elapsed_ms(),
    )


def quadruple_check(p: int, oracle: bool = False) -> CheckResult:
    """sum_{1<=i<j<k<l<=p-1} 1/(ijkl) = 0 (mod p)"""
    ensure_applicable(p, 7)
    timer = Stopwatch()
    ctx = prime_context(p, 1)
    audit = MhsAudit(ctx, oracle)

    value = audit(E4_SPEC, p - 1)
    members = [Congruence(label="e4 = 0", lhs=value, rhs=0, modulus=p)] + audit.members
    return CheckResult(
        check_id="quadruple", prime=p, members=members,
        oracle_checked=audit.checked, elapsed_ms=timer.elapsed_ms(),
    )
