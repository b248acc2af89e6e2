import logging
import os

import pytest
import pytest_mock

from galoisties import init_workbench_conf
from galoisties.config import ComputeConfig, get_compute_conf, \
    get_workbench_conf

ENV_KEYS = ('WORKBENCH_THREADS', 'WORKBENCH_MAX_DEGREE', 'WORKBENCH_LOGLEVEL')


@pytest.fixture(scope='function')
def clean_env(mocker: pytest_mock.MockerFixture):
    mocker.patch.dict(os.environ)
    for key in ENV_KEYS:
        os.environ.pop(key, None)


@pytest.fixture(scope='function')
def missing_conf(tmp_path):
    return tmp_path / 'missing.yaml'


class TestWorkbenchConfig:
    def test_uninitialized(self):
        with pytest.raises(RuntimeError, match='Uninitialized'):
            get_workbench_conf()
        assert get_compute_conf() == ComputeConfig()

    def test_init_by_defaults(self, clean_env, missing_conf):
        init_workbench_conf(missing_conf)

        conf = get_workbench_conf()

        assert conf.compute == ComputeConfig()
        assert conf.logging.loglevel == 'INFO'

    def test_init_by_cli(self, clean_env, missing_conf):
        init_workbench_conf(missing_conf, threads=3, max_degree=2,
                            force_large=True, loglevel='DEBUG')

        conf = get_workbench_conf()

        assert conf.compute.threads == 3
        assert conf.compute.max_degree == 2
        assert conf.compute.force_large
        assert conf.logging.loglevel == 'DEBUG'
        assert get_compute_conf() is conf.compute

    def test_init_by_env(self, clean_env, missing_conf):
        os.environ.update({
            'WORKBENCH_THREADS': '5',
            'WORKBENCH_MAX_DEGREE': '3',
            'WORKBENCH_LOGLEVEL': 'WARNING',
        })

        init_workbench_conf(missing_conf)

        conf = get_workbench_conf()

        assert conf.compute.threads == 5
        assert conf.compute.max_degree == 3
        assert conf.logging.loglevel == 'WARNING'

    def test_init_by_conf(self, clean_env, fake_local_file_maker):
        content = b'''
threads: 4
max_degree: 8
bar_max_coordinates: 500
appendix_precision: 7
force_large: true
logging_level: ERROR
'''

        conf_path = fake_local_file_maker(content, suffix='.yaml')

        init_workbench_conf(conf_path)

        conf = get_workbench_conf()

        assert conf.compute == ComputeConfig(
            threads=4, max_degree=8, bar_max_coordinates=500,
            appendix_precision=7, force_large=True)
        assert conf.logging.loglevel == 'ERROR'

    def test_init_by_resource(self, clean_env, resources):
        init_workbench_conf(resources('config.yaml'))

        conf = get_workbench_conf()

        assert conf.compute.threads == 2
        assert conf.compute.max_degree == 4
        assert conf.compute.appendix_precision == 5
        assert conf.logging.loglevel == 'WARNING'

    def test_init_by_mixin(self, clean_env, fake_local_file_maker):
        content = b'''
threads: 4
max_degree: 8
logging_level: ERROR
'''

        conf_path = fake_local_file_maker(content, suffix='.yaml')

        os.environ.update({
            'WORKBENCH_THREADS': '6',
            'WORKBENCH_MAX_DEGREE': '3',
        })

        init_workbench_conf(conf_path, threads=2, max_degree=1)

        conf = get_workbench_conf()

        # the env wins for threads only; the cli wins for the degree
        assert conf.compute.threads == 6
        assert conf.compute.max_degree == 1
        assert conf.logging.loglevel == 'ERROR'

    def test_threads_at_least_one(self, clean_env, missing_conf):
        os.environ['WORKBENCH_THREADS'] = '-2'

        init_workbench_conf(missing_conf)

        assert get_compute_conf().threads == 1


class TestLogging:
    def test_level_follows_config(self, clean_env, missing_conf):
        from galoisties.logging import get_logger
        logger = get_logger('galoisties.tests.level')

        init_workbench_conf(missing_conf, loglevel='ERROR')
        assert logger.handlers[-1].level == logging.ERROR

        init_workbench_conf(missing_conf, loglevel='DEBUG')
        assert logger.handlers[-1].level == logging.DEBUG

    def test_stdout_stays_clean(self, clean_env, missing_conf, capsys):
        from galoisties.logging import get_logger
        init_workbench_conf(missing_conf, loglevel='DEBUG')

        get_logger('galoisties.tests.stream').warning('lattice too large')

        assert capsys.readouterr().out == ''
