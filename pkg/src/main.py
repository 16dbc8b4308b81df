"""


Главная точка запуска приложения.
Подкоманды: verify (прогон реестра по простым), list-checks, eval.
"""

import argparse
import asyncio
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

# Добавить текущий каталог в sys.path
sys.path.insert(0, str(Path(__file__).parent))

import yaml
from pydantic import ValidationError

from bernoulli import bernoulli_exact, bernoulli_mod
from config import AppConfig, ConfigManager, RunConfig, build_run_config
from errors import ArithmeticFailure, HarmonicCheckError, UsageError
from harmonic import harmonic_exact
from identities import CheckRegistry, hernandez_check
from local_field import prime_context, reduce, valuation
from models import CheckOptions, OutputFormat
from multi_harmonic import MhsSpec, mhs, mhs_bruteforce
from report import RecordFormatter, ReportEmitter, create_sink, format_descriptor, render_value
from utils import RunStatistics, setup_logging, sieve_primes


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# ======================== VERIFY ========================

def execute(config: RunConfig, registry: Optional[CheckRegistry] = None) -> int:
    """
    Прогнать реестр по простым из диапазона и выдать отчёт

    Returns:
        0 - все проверки прошли, 1 - есть провал, 2 - ошибка использования
    """
    registry = registry or CheckRegistry()
    try:
        ids = registry.resolve(config.check_ids)
        primes = sieve_primes(*config.prime_range)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE

    try:
        return asyncio.run(_execute_async(config, registry, ids, primes))
    except KeyboardInterrupt:
        logger.warning("Interrupted by user; report holds the ordered prefix emitted so far")
        return EXIT_FAILED


async def _execute_async(config: RunConfig, registry: CheckRegistry, ids: List[str], primes: List[int]) -> int:
    stats = RunStatistics()
    stats.primes_scanned = len(primes)
    color = config.format == OutputFormat.TEXT and config.output is None and sys.stdout.isatty()
    formatter = RecordFormatter(config.format, timing=config.timing, color=color)
    options = CheckOptions(oracle=config.oracle, wolstenholme_max_order=config.wolstenholme_max_order)
    mutate = random.Random(config.seed) if config.mutate else None

    logger.info(
        f"Verifying {len(ids)} check(s) on {len(primes)} prime(s) in "
        f"{config.prime_range[0]}..{config.prime_range[1]}"
    )

    sink = create_sink(config.output)
    try:
        await sink.open()
    except OSError as e:
        logger.error(f"Cannot open report output: {e}")
        return EXIT_USAGE

    emitter = ReportEmitter(formatter, sink)
    try:
        report = await registry.run_async(
            primes, ids, options=options, jobs=config.jobs, on_result=emitter.emit, mutate=mutate,
        )
        await emitter.finish()
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE if emitter.emitted == 0 else EXIT_FAILED
    except ArithmeticFailure as e:
        logger.error(f"Arithmetic failure inside a check: {e}")
        return EXIT_FAILED
    finally:
        await sink.close()

    stats.records = len(report.results)
    stats.failed = len(report.failed)
    stats.skipped = len(report.skipped)
    summary = stats.finalize()
    logger.info(
        f"Done in {summary['duration_formatted']}: {summary['records']} record(s), "
        f"{summary['failed']} failed, {summary['skipped']} skipped"
    )
    return EXIT_OK if report.all_passed else EXIT_FAILED


# ======================== EVAL ========================

def _int_args(args: Sequence[str], required: int, name: str) -> List[int]:
    if len(args) < required:
        raise UsageError(f"eval {name}: ожидалось не меньше {required} аргументов")
    try:
        return [int(a) for a in args]
    except ValueError as e:
        raise UsageError(f"eval {name}: {e}") from e


def _modular_suffix(value: Fraction, rest: Sequence[int]) -> str:
    if not rest:
        return ""
    p = rest[0]
    e = rest[1] if len(rest) > 1 else 1
    return f"  ≡ {reduce(value, prime_context(p, e)).residue} (mod {p}^{e})"


def evaluate(op: str, args: Sequence[str], oracle: bool = False) -> str:
    """
    Выполнить одну операцию eval и вернуть строку результата

    Raises:
        UsageError: при неизвестной операции или неверных аргументах
        ArithmeticFailure: если значение не определено по модулю p^e
    """
    if op == "harmonic":
        n, m, *rest = _int_args(args, 2, op)
        value = harmonic_exact(n, m)
        return f"H({n},{m}) = {render_value(value)}{_modular_suffix(value, rest)}"

    if op == "bernoulli":
        k, *rest = _int_args(args, 1, op)
        value = bernoulli_exact(k)
        if rest:
            p = rest[0]
            e = rest[1] if len(rest) > 1 else 1
            residue = bernoulli_mod(k, prime_context(p, e)).residue
            return f"B({k}) = {render_value(value)}  ≡ {residue} (mod {p}^{e})"
        return f"B({k}) = {render_value(value)}"

    if op == "mhs":
        if len(args) < 3:
            raise UsageError("eval mhs: ожидалось s1,s2,... n p [e]")
        spec = MhsSpec.parse(args[0])
        n, p, *rest = _int_args(args[1:], 2, op)
        ctx = prime_context(p, rest[0] if rest else 1)
        line = f"S{spec}({n}) ≡ {mhs(spec, n, ctx).residue} (mod {p}^{ctx.exponent})"
        if oracle:
            exact = mhs_bruteforce(spec, n)
            line += f"\nenumeration: {render_value(exact)}  ≡ {reduce(exact, ctx).residue}"
        return line

    if op == "hernandez":
        n, m = _int_args(args, 2, op)[:2]
        result = hernandez_check(n, m)
        member = result.members[0]
        status = "PASS" if result.passed else "FAIL"
        return f"{status}  lhs = {render_value(member.lhs)}  rhs = {render_value(member.rhs)}"

    if op == "valuation":
        if len(args) < 2:
            raise UsageError("eval valuation: ожидалось a/b p")
        try:
            q = Fraction(args[0])
        except ValueError as e:
            raise UsageError(f"eval valuation: {e}") from e
        p = _int_args(args[1:], 1, op)[0]
        return f"v_{p}({render_value(q)}) = {valuation(q, p)}"

    raise UsageError(f"Неизвестная операция eval: {op!r}")


# ======================== CLI ========================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default='config.yaml', help='Path to config file (default: config.yaml)')
    common.add_argument('--debug', action='store_true', help='Enable debug logging')

    parser = argparse.ArgumentParser(
        prog="harmcheck",
        description="Exact verification of harmonic-sum congruences modulo prime powers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python src/main.py verify --primes 7..499                  # All checks, text report
  python src/main.py verify --primes 7..61 --format json --oracle
  python src/main.py verify --check theorem_1_1,remarks --jobs 8 --no-timing
  python src/main.py list-checks
  python src/main.py eval --op harmonic --args 6 1 7 2
        """,
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    verify = subparsers.add_parser('verify', parents=[common], help='Run registered checks over a prime range')
    verify.add_argument('--primes', type=str, default=None, help='Inclusive prime range lo..hi')
    verify.add_argument('--check', type=str, default=None, help='Comma-separated check ids or "all"')
    verify.add_argument('--format', type=str, choices=[f.value for f in OutputFormat], default=None)
    verify.add_argument('--jobs', type=int, default=None, help='Worker processes (default: CPU count)')
    verify.add_argument('--oracle', action='store_true', default=None, help='Cross-check sums by enumeration where bounded')
    verify.add_argument('--output', type=str, default=None, help='Write the report to a file instead of stdout')
    verify.add_argument('--no-timing', dest='timing', action='store_const', const=False, default=None,
                        help='Report elapsed_ms as 0 (byte-identical output)')
    verify.add_argument('--mutate', action='store_true', default=None, help='Perturb one random record (self-test)')
    verify.add_argument('--seed', type=int, default=None, help='Seed for --mutate')

    subparsers.add_parser('list-checks', parents=[common], help='Print the check registry')

    evaluate_parser = subparsers.add_parser('eval', parents=[common], help='Evaluate a single operation')
    evaluate_parser.add_argument('--op', required=True, choices=['harmonic', 'bernoulli', 'mhs', 'hernandez', 'valuation'])
    evaluate_parser.add_argument('--args', nargs='*', default=[], help='Operation arguments')
    evaluate_parser.add_argument('--oracle', action='store_true', help='Also evaluate by enumeration (mhs)')

    return parser


def _load_config(path: str) -> Optional[AppConfig]:
    try:
        return ConfigManager.load(path)
    except (yaml.YAMLError, ValidationError) as e:
        logger.error(f"Invalid configuration {path}: {e}")
        return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Главная функция"""
    args = build_parser().parse_args(argv)

    setup_logging(level=logging.DEBUG if args.debug else logging.INFO)
    config = _load_config(args.config)
    if config is None:
        return EXIT_USAGE

    level = logging.DEBUG if args.debug else getattr(logging, config.logging.level)
    setup_logging(level=level, log_file=config.logging.file)

    if args.command == 'list-checks':
        for descriptor in CheckRegistry().descriptors():
            sys.stdout.write(format_descriptor(descriptor))
        return EXIT_OK

    if args.command == 'eval':
        try:
            print(evaluate(args.op, args.args, oracle=args.oracle))
        except (HarmonicCheckError, ValueError) as e:
            logger.error(f"eval {args.op}: {e}")
            return EXIT_USAGE
        return EXIT_OK

    try:
        run_config = build_run_config(
            config,
            primes=args.primes,
            check_ids=[c.strip() for c in args.check.split(",") if c.strip()] if args.check else None,
            format=args.format,
            jobs=args.jobs,
            oracle=args.oracle,
            timing=args.timing,
            output=args.output,
            mutate=args.mutate,
            seed=args.seed,
        )
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE

    return execute(run_config)


if __name__ == '__main__':
    sys.exit(main())
