"""
Verification reports: a list of named checks with expected and actual
values, rendered as text lines or as JSON.
"""
import concurrent.futures
import dataclasses
import time
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Sequence

from autodict import Options
from autoserde import AutoSerde

from galoisties.logging import get_logger

logger = get_logger(__name__)

PASS = 'pass'
FAIL = 'fail'
EVIDENCE = 'evidence'


@dataclasses.dataclass
class Check:
    name: str

    # one of PASS, FAIL or EVIDENCE; the last one is reserved for conjectures
    status: str

    expected: str = ''
    actual: str = ''
    detail: str = ''

    @property
    def failed(self) -> bool:
        return self.status == FAIL


@dataclasses.dataclass
class Report:
    command: str
    params: Dict[str, str]
    checks: List[Check]
    elapsed_ms: int = 0

    # rendered after the checks, e.g. a ring presentation
    presentation: str = ''

    # the same presentation as plain data, JSON only
    structure: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> str:
        return AutoSerde.serialize(self, fmt='json',
                                   options=Options(with_cls=False))

    def to_text(self) -> str:
        lines = [f'{self.command} ' + ' '.join(
            f'--{k} {v}' for k, v in self.params.items())]
        for c in self.checks:
            line = f'[{c.status.upper()}] {c.name}: {c.actual}'
            if c.status != PASS and c.expected:
                line += f' (expected {c.expected})'
            lines.append(line)
            if c.detail and c.status != PASS:
                lines.append(f'    {c.detail}')
        if self.presentation:
            lines.append(self.presentation)
        return '\n'.join(lines)


def render(x: Any) -> str:
    """Deterministic text for exact values, tuples and lists of them."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return 'true' if x else 'false'
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else str(x)
    if isinstance(x, (tuple, list)):
        return '(' + ', '.join(render(y) for y in x) + ')'
    return str(x)


def check(name: str, ok: bool, *, expected: Any = '', actual: Any = '',
          detail: str = '') -> Check:
    status = PASS if ok else FAIL
    if not ok:
        logger.warning(f'check {name} failed: {render(actual)} vs '
                       f'{render(expected)} {detail}')
    return Check(name=name, status=status, expected=render(expected),
                 actual=render(actual), detail=detail)


def equality_check(name: str, actual: Any, expected: Any,
                   detail: str = '') -> Check:
    return check(name, actual == expected, expected=expected, actual=actual,
                 detail=detail)


def evidence(name: str, *, expected: Any = '', actual: Any = '',
             detail: str = '') -> Check:
    return Check(name=name, status=EVIDENCE, expected=render(expected),
                 actual=render(actual), detail=detail)


def run_checks(tasks: Sequence[Callable[[], Iterable[Check]]],
               threads: int = 1) -> List[Check]:
    """
    Run independent check producers, merging results in submission order.

    :param tasks: callables returning checks.
    :param threads: worker threads; 1 runs everything inline.
    """
    if threads <= 1 or len(tasks) <= 1:
        return [c for task in tasks for c in task()]

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [c for future in futures for c in future.result()]


class Stopwatch:
    def __init__(self):
        self.start = time.monotonic()

    @property
    def elapsed_ms(self) -> int:
        return int((time.monotonic() - self.start) * 1000)
