import logging
import sys
from typing import Dict

import coloredlogs

from galoisties.config import get_logging_conf

# reports own stdout, so every log record goes to stderr
LOG_FORMAT = '%(asctime)s %(name)s[%(process)d] %(levelname)s %(message)s'

_loggers: Dict[str, logging.Logger] = dict()


def _install(logger: logging.Logger, loglevel: str):
    coloredlogs.install(level=loglevel, logger=logger, fmt=LOG_FORMAT,
                        stream=sys.stderr)


def get_logger(name) -> logging.Logger:
    """
    Logger for a galoisties module, installed at the configured level.

    The logger is registered so that a later `init_logging` moves it to the
    level resolved from the cli, env and config file.
    """
    conf = get_logging_conf()

    if name in _loggers:
        logger = _loggers[name]
    else:
        logger = logging.getLogger(name)
        logger.propagate = False
        _loggers[name] = logger

        _install(logger, conf.loglevel)

    return logger


def init_logging():
    conf = get_logging_conf()
    coloredlogs.DEFAULT_FIELD_STYLES['levelname']['color'] = 'yellow'
    coloredlogs.DEFAULT_FIELD_STYLES['name']['color'] = 'cyan'

    for logger in _loggers.values():
        _install(logger, conf.loglevel)
