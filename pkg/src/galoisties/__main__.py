import functools
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

import fire

from galoisties.config import init_workbench_conf
from galoisties.errors import PreconditionError, ResourceError, UsageError
from galoisties.report import Check, Report, Stopwatch

FORMATS = ('text', 'json')
TARGETS = ('ft16', 'resolution', 'ag11', 'nd3', 'nd7')
METHODS = ('classical', 'bar', 'lift')

# checks, plus the ring presentation for the ring command
Produce = Callable[[], Tuple[List[Check], Optional[Any]]]


def _run(command: str, params: Dict[str, object], fmt: str,
         produce: Produce) -> int:
    watch = Stopwatch()
    try:
        if fmt not in FORMATS:
            raise UsageError(f'format must be one of {FORMATS}, got {fmt!r}')
        checks, presentation = produce()
    except (UsageError, PreconditionError, ResourceError) as e:
        print(f'error: {e}', file=sys.stderr)
        return 2

    report = Report(command=command,
                    params={k: str(v) for k, v in params.items()},
                    checks=checks, elapsed_ms=watch.elapsed_ms)
    if presentation is not None:
        report.presentation = presentation.text
        report.structure = presentation.to_dict()
    print(report.to_json() if fmt == 'json' else report.to_text())
    return report.exit_code


def _tower(p, n, kind):
    from galoisties.fields import build_tower
    return build_tower(int(p), int(n), kind)


def _setup(conf_path, threads, loglevel, force=None):
    init_workbench_conf(conf_path, threads=threads, loglevel=loglevel,
                        force_large=force)


def ring(*, p: int = 3, n: int = 2, kind: str = 'pi', format: str = 'text',
         threads: int = None, loglevel: str = None,
         conf_path: str = None) -> int:
    """
    Compute the Ext ring of a cyclotomic tower and print its presentation.

    :param p: An odd prime.
    :param n: The tower level, at least 2.
    :param kind: Either "pi" or "theta", choosing the uniformizers.
    :param format: Either "text" or "json".
    :param threads: Number of worker threads. The env var `WORKBENCH_THREADS`
      wins over this flag.
    :param loglevel: The log level, can be any one of ['DEBUG', 'INFO',
      'WARNING', 'ERROR', 'FATAL', 'CRITICAL'].
    :param conf_path: Path to the configuration file, default as
      "~/.galoisties/config.yaml".
    """
    _setup(conf_path, threads, loglevel)

    def produce():
        from galoisties import cohom
        from galoisties.config import get_compute_conf
        from galoisties.report import equality_check

        tower = _tower(p, n, kind)
        maps = cohom.resolution_elements(tower)
        checks = [equality_check(f'Ext^{i}',
                                 str(cohom.cochain_homology(tower, i, maps)
                                     .module),
                                 str(cohom.ext_module_formula(tower, i)))
                  for i in range(get_compute_conf().max_degree + 1)]
        return checks, cohom.ring_presentation(tower)

    return _run('ring', dict(p=p, n=n, kind=kind), format, produce)


def verify(target: str = 'all', *, p: int = 3, n: int = 2, kind: str = 'pi',
           format: str = 'text', threads: int = None, loglevel: str = None,
           conf_path: str = None) -> int:
    """
    Run a verification suite.

    :param target: One of "ft16" (ties describe the twisted group ring),
      "resolution", "ag11" (the Ext ring), "nd3" (block decomposition),
      "nd7" (Ext over the tame extension), or "all".
    :param p: An odd prime.
    :param n: The tower level, at least 2; the block targets use level 2.
    :param kind: Either "pi" or "theta".
    :param format: Either "text" or "json".
    :param threads: Number of worker threads for independent suites.
    :param loglevel: The log level.
    :param conf_path: Path to the configuration file.
    """
    _setup(conf_path, threads, loglevel)

    def produce():
        from galoisties import cohom, nebe, ties
        from galoisties.config import get_compute_conf
        from galoisties.report import run_checks

        targets = TARGETS if target == 'all' else (target,)
        if any(t not in TARGETS for t in targets):
            raise UsageError(f'target must be one of {TARGETS} or all, '
                             f'got {target!r}')
        tower = _tower(p, n, kind)
        suites = {
            'ft16': lambda: ties.verify_ft16(tower),
            'resolution': lambda: cohom.verify_resolution(tower),
            'ag11': lambda: cohom.verify_ring(tower),
            'nd3': lambda: nebe.verify_nd3(int(p)),
            'nd7': lambda: nebe.verify_nd7(int(p)),
        }
        checks = run_checks([suites[t] for t in targets],
                            get_compute_conf().threads)
        return checks, None

    return _run('verify', dict(target=target, p=p, n=n, kind=kind), format,
                produce)


def appendix(*, p: int = 3, check: str = 'all', force: bool = False,
             format: str = 'text', threads: int = None, loglevel: str = None,
             conf_path: str = None) -> int:
    """
    Run the C_{p^2} experiment.

    :param p: 3, 5 or 7; larger primes need --force.
    :param check: One of "conjecture", "colengths", "matrices" or "all".
    :param force: Allow the guarded large computations (p = 7 lattices).
    :param format: Either "text" or "json".
    :param threads: Number of worker threads for the per-element checks.
    :param loglevel: The log level.
    :param conf_path: Path to the configuration file.
    """
    _setup(conf_path, threads, loglevel, force or None)

    def produce():
        from galoisties.appendix import run_appendix
        return run_appendix(int(p), check), None

    return _run('appendix', dict(p=p, check=check), format, produce)


def oracle(*, p: int = 3, n: int = 2, kind: str = 'pi', method: str = 'all',
           format: str = 'text', threads: int = None, loglevel: str = None,
           conf_path: str = None) -> int:
    """
    Compare the Ext computation with independent ones.

    :param p: An odd prime.
    :param n: The tower level, at least 2.
    :param kind: Either "pi" or "theta".
    :param method: One of "classical", "bar", "lift" or "all".
    :param format: Either "text" or "json".
    :param threads: Number of worker threads for independent comparisons.
    :param loglevel: The log level.
    :param conf_path: Path to the configuration file.
    """
    _setup(conf_path, threads, loglevel)

    def produce():
        from galoisties import oracle as oracles
        from galoisties.config import get_compute_conf
        from galoisties.report import run_checks

        methods = METHODS if method == 'all' else (method,)
        if any(m not in METHODS for m in methods):
            raise UsageError(f'method must be one of {METHODS} or all, '
                             f'got {method!r}')
        tower = _tower(p, n, kind)
        suites = {
            'classical': lambda: oracles.classical_checks(tower),
            'bar': lambda: oracles.bar_checks(tower),
            'lift': lambda: oracles.lift_checks(tower),
        }
        checks = run_checks([suites[m] for m in methods],
                            get_compute_conf().threads)
        return checks, None

    return _run('oracle', dict(p=p, n=n, kind=kind, method=method), format,
                produce)


def _exiting(command: Callable[..., int]) -> Callable[..., None]:
    # fire prints whatever a command returns, so the code leaves via exit
    @functools.wraps(command)
    def run(*args, **kwargs):
        sys.exit(command(*args, **kwargs))

    return run


def main():
    fire.Fire({
        name: _exiting(command) for name, command in (
            ('ring', ring),
            ('verify', verify),
            ('appendix', appendix),
            ('oracle', oracle),
        )
    })


if __name__ == '__main__':
    main()
