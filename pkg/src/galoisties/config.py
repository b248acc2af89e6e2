import dataclasses
import os
import pprint
from pathlib import Path
from typing import Optional, Union

from autoserde import AutoSerde


@dataclasses.dataclass
class LoggingConfig:
    loglevel: str = 'INFO'


@dataclasses.dataclass
class ComputeConfig:
    # number of worker threads for independent checks
    threads: int = 1

    # highest cohomological degree reported by ring and oracle sweeps
    max_degree: int = 6

    # bar-resolution cochain spaces beyond this many S-coordinates are refused
    bar_max_coordinates: int = 100000

    # exponent K of the modulus p^K used by the appendix lattice elimination
    appendix_precision: int = 6

    # allow the guarded large computations (p = 7 appendix lattices)
    force_large: bool = False


@dataclasses.dataclass
class WorkbenchConf:
    # logging configuration
    logging: LoggingConfig

    # computation limits and parallelism
    compute: ComputeConfig


@dataclasses.dataclass
class WorkbenchConfFile:
    threads: Optional[int] = None
    max_degree: Optional[int] = None
    bar_max_coordinates: Optional[int] = None
    appendix_precision: Optional[int] = None
    force_large: Optional[bool] = None
    logging_level: Optional[str] = None


_logging_conf: LoggingConfig = LoggingConfig()

_workbench_conf: Optional[WorkbenchConf] = None


def init_workbench_conf(conf_path: Union[str, Path, None] = None, *,
                        threads: Optional[int] = None,
                        max_degree: Optional[int] = None,
                        force_large: Optional[bool] = None,
                        loglevel: Optional[str] = None) -> WorkbenchConf:
    global _workbench_conf

    conf_path = conf_path or (Path.home() / '.galoisties' / 'config.yaml')
    conf = AutoSerde.deserialize(conf_path, cls=WorkbenchConfFile) \
        if os.path.exists(conf_path) else WorkbenchConfFile()

    # the environment wins over the command line for the thread count
    threads = \
        os.getenv('WORKBENCH_THREADS') or \
        threads or \
        conf.threads or \
        ComputeConfig.threads
    max_degree = \
        max_degree or \
        os.getenv('WORKBENCH_MAX_DEGREE') or \
        conf.max_degree or \
        ComputeConfig.max_degree
    force_large = \
        force_large or \
        conf.force_large or \
        ComputeConfig.force_large
    loglevel = \
        loglevel or \
        os.getenv('WORKBENCH_LOGLEVEL') or \
        conf.logging_level or \
        LoggingConfig.loglevel

    logging_conf = __init_logging_conf(loglevel)

    from galoisties.logging import get_logger
    logger = get_logger(__name__)

    _workbench_conf = WorkbenchConf(
        logging=logging_conf,
        compute=ComputeConfig(
            threads=max(1, int(threads)),
            max_degree=int(max_degree),
            bar_max_coordinates=conf.bar_max_coordinates or
            ComputeConfig.bar_max_coordinates,
            appendix_precision=conf.appendix_precision or
            ComputeConfig.appendix_precision,
            force_large=bool(force_large),
        ),
    )
    logger.debug(f'Workbench config: \n{pprint.pformat(_workbench_conf)}')
    return _workbench_conf


def get_logging_conf() -> LoggingConfig:
    return _logging_conf


def get_workbench_conf() -> WorkbenchConf:
    if _workbench_conf is None:
        raise RuntimeError(
            f'Uninitialized: you must initialize galoisties config via '
            f'`:py:func:init_workbench_conf` before accessing it.'
        )

    return _workbench_conf


def get_compute_conf() -> ComputeConfig:
    """Compute limits, falling back to defaults when nothing was initialized."""
    if _workbench_conf is None:
        return ComputeConfig()

    return _workbench_conf.compute


def __init_logging_conf(loglevel: str):
    global _logging_conf
    _logging_conf.loglevel = loglevel

    from galoisties.logging import init_logging
    init_logging()

    return _logging_conf
