"""


Отображение записей проверок (text / JSON lines / CSV) и приёмники отчёта.
"""

import csv
import io
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Iterable, List, Optional, TextIO

import aiofiles
from colorama import Fore, Style

from models import CheckDescriptor, CheckResult, OutputFormat


logger = logging.getLogger(__name__)


CSV_COLUMNS = ['check_id', 'prime', 'modulus', 'lhs', 'rhs', 'pass', 'oracle_checked', 'elapsed_ms']


# ======================== ЗНАЧЕНИЯ ========================

def render_value(value: Any) -> Any:
    """Дробь -> "a/b", остальное без изменений"""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def _render_list(values: Iterable[Any]) -> List[Any]:
    return [render_value(v) for v in values]


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ";".join(_cell(v) for v in value)
    return str(render_value(value))


# ======================== ФОРМАТЫ ========================

class RecordFormatter:
    """Превращает CheckResult в строки отчёта выбранного формата"""

    def __init__(self, fmt: OutputFormat = OutputFormat.TEXT, timing: bool = True, color: bool = False):
        self.fmt = OutputFormat(fmt)
        self.timing = timing
        self.color = color

    def header(self) -> str:
        """Строка перед первой записью (только для CSV)"""
        if self.fmt == OutputFormat.CSV:
            return self._csv_line(CSV_COLUMNS)
        return ""

    def format(self, result: CheckResult) -> str:
        record = result.to_record(timing=self.timing)
        if self.fmt == OutputFormat.JSON:
            return self._json_line(record)
        if self.fmt == OutputFormat.CSV:
            return self._csv_line([_cell(record[column]) for column in CSV_COLUMNS])
        return self._text_line(result, record)

    @staticmethod
    def _json_line(record: dict) -> str:
        record = dict(record)
        for key in ('lhs', 'rhs'):
            record[key] = _render_list(record[key])
        return json.dumps(record, ensure_ascii=False) + "\n"

    @staticmethod
    def _csv_line(cells: List[str]) -> str:
        buffer = io.StringIO()
        csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\n").writerow(cells)
        return buffer.getvalue()

    def _text_line(self, result: CheckResult, record: dict) -> str:
        status = "PASS" if result.passed else "FAIL"
        if self.color:
            status = f"{Fore.GREEN if result.passed else Fore.RED}{status}{Style.RESET_ALL}"

        where = f"p={result.prime}" if result.prime is not None else "exact"
        line = f"{status}  {result.check_id:<20} {where:<8} members={len(result.members)}"
        if result.oracle_checked:
            line += "  oracle"
        if self.timing:
            line += f"  {record['elapsed_ms']:.3f}ms"

        for member in result.failing_members():
            modulus = f" (mod {member.modulus})" if member.modulus is not None else ""
            line += (
                f"\n      {member.label}: lhs={_cell(member.lhs)} rhs={_cell(member.rhs)}{modulus}"
            )
        return line + "\n"


def format_descriptor(descriptor: CheckDescriptor) -> str:
    """Строка list-checks: id, модуль, границы, ссылка, формулировка"""
    if descriptor.prime_free:
        scope = "exact, n = p-1"
    else:
        scope = f"mod p^{descriptor.modulus_exponent}"
    bounds = f"p >= {descriptor.min_prime}"
    if descriptor.max_prime is not None:
        bounds += f", p <= {descriptor.max_prime}"
    return f"{descriptor.id:<20} {scope:<16} {bounds:<20} [{descriptor.paper_anchor}] {descriptor.anchor}\n"


# ======================== ПРИЁМНИКИ ========================

class ReportSink:
    """Базовый асинхронный приёмник строк отчёта"""

    async def open(self) -> None:
        pass

    async def write(self, text: str) -> None:
        raise NotImplementedError

    async def close(self) -> None:
        pass

    async def __aenter__(self) -> "ReportSink":
        await self.open()
        return self

    async def __aexit__(self, exc_type, exc, tb) -> None:
        await self.close()


class StreamSink(ReportSink):
    """Запись в поток (по умолчанию stdout) с немедленным flush"""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream or sys.stdout

    async def write(self, text: str) -> None:
        if text:
            self.stream.write(text)
            self.stream.flush()


class FileSink(ReportSink):
    """Запись в файл через aiofiles"""

    def __init__(self, path: str):
        self.path = path
        self._file = None

    async def open(self) -> None:
        self._file = await aiofiles.open(self.path, mode='w', encoding='utf-8', newline='')
        logger.debug(f"Report file opened: {self.path}")

    async def write(self, text: str) -> None:
        if text:
            await self._file.write(text)
            await self._file.flush()

    async def close(self) -> None:
        if self._file is not None:
            await self._file.close()
            self._file = None


def create_sink(output: Optional[str]) -> ReportSink:
    """Фабрика приёмника: None -> stdout, иначе файл"""
    if output:
        return FileSink(output)
    return StreamSink()


class ReportEmitter:
    """Связка форматтера и приёмника: заголовок один раз, затем записи"""

    def __init__(self, formatter: RecordFormatter, sink: ReportSink):
        self.formatter = formatter
        self.sink = sink
        self.emitted = 0
        self._header_written = False

    async def emit(self, result: CheckResult) -> None:
        if not self._header_written:
            await self.sink.write(self.formatter.header())
            self._header_written = True
        await self.sink.write(self.formatter.format(result))
        self.emitted += 1

    async def finish(self) -> None:
        """Для CSV заголовок пишется даже при пустом прогоне"""
        if not self._header_written:
            await self.sink.write(self.formatter.header())
            self._header_written = True
