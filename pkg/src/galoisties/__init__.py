from galoisties.config import init_workbench_conf
from galoisties.errors import GaloisTiesError
from galoisties.fields import build_tower
from galoisties.report import Check, Report

try:
    import importlib.metadata as _importlib_metadata
except ModuleNotFoundError:
    # noinspection PyUnresolvedReferences
    import importlib_metadata as _importlib_metadata

__all__ = ['__version__', 'init_workbench_conf', 'build_tower', 'Check',
           'GaloisTiesError', 'Report']

try:
    __version__ = _importlib_metadata.version("galoisties")
except _importlib_metadata.PackageNotFoundError:
    __version__ = "unknown version"
