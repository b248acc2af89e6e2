import dataclasses
import os
import pathlib
import tempfile
from typing import Any, Tuple

import pytest

from galoisties import config
from galoisties.fields import ExtensionTower, build_tower, polynomial_tower


@pytest.fixture(scope='session')
def tower32() -> ExtensionTower:
    """Z_(3) ⊂ Z_(3)[π_2], b = 1."""
    return build_tower(3, 2, 'pi')


@pytest.fixture(scope='session')
def theta32() -> ExtensionTower:
    """Z_(3)[ζ_3] ⊂ Z_(3)[ζ_9], b = 2."""
    return build_tower(3, 2, 'theta')


@pytest.fixture(scope='session')
def tower52() -> ExtensionTower:
    return build_tower(5, 2, 'pi')


@pytest.fixture(scope='session')
def tower33() -> ExtensionTower:
    """Z_(3)[π_2] ⊂ Z_(3)[π_3], b = 4."""
    return build_tower(3, 3, 'pi')


@pytest.fixture(scope='session')
def root_tower() -> ExtensionTower:
    """Z_(3)[X]/(X^3 + 3X^2 - 18X + 48), b = 1."""
    return polynomial_tower(3, (48, -18, 3, 1))


@pytest.fixture(autouse=True)
def fresh_workbench_conf(monkeypatch):
    monkeypatch.setattr(config, '_workbench_conf', None)


@pytest.fixture(scope='session')
def resources():
    resource_root = pathlib.Path(__file__).parent / 'resources'

    def find(relpath):
        return (resource_root / relpath).resolve()

    return find


@pytest.fixture(scope='function')
def fake_local_file_maker(tmp_path, faker):
    paths = []

    # noinspection PyShadowingBuiltins
    def make(content=None, dir=None, **kwargs):
        dir = dir or tmp_path
        _path = pathlib.Path(tempfile.mktemp(dir=dir, **kwargs))
        _path.write_bytes(faker.text().encode() if content is None else content)
        paths.append(_path)
        return _path

    try:
        yield make

    finally:
        for path in paths:
            if os.path.exists(path):
                os.remove(path)


@dataclasses.dataclass
class Raises:
    exc: Any or Tuple[Any, ...]
    kwargs: dict = dataclasses.field(default_factory=dict)


def case_name(case):
    return case.name
