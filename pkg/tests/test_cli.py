import json
import os
import subprocess
import sys

import pytest
import pytest_mock

from galoisties import __main__ as cli


@pytest.fixture(scope='function')
def no_conf(tmp_path, mocker: pytest_mock.MockerFixture):
    mocker.patch.dict(os.environ)
    for key in ('WORKBENCH_THREADS', 'WORKBENCH_MAX_DEGREE',
                'WORKBENCH_LOGLEVEL'):
        os.environ.pop(key, None)
    return str(tmp_path / 'missing.yaml')


class TestRing:
    def test_text(self, no_conf, capsys):
        assert cli.ring(p=3, conf_path=no_conf) == 0

        out = capsys.readouterr().out.splitlines()
        assert out[0] == 'ring --p 3 --n 2 --kind pi'
        assert '[PASS] Ext^0: S' in out
        assert '[PASS] Ext^6: S/s^1' in out
        assert out[-1] == 'Z_(3)[h1,h2]/(3h1, 3h2, h1^2)'

    def test_json(self, no_conf, capsys):
        assert cli.ring(p=3, format='json', conf_path=no_conf) == 0

        data = json.loads(capsys.readouterr().out)
        assert data['command'] == 'ring'
        assert data['params'] == {'p': '3', 'n': '2', 'kind': 'pi'}
        assert data['presentation'] == 'Z_(3)[h1,h2]/(3h1, 3h2, h1^2)'
        assert len(data['checks']) == 7

    def test_json_presentation_p5(self, no_conf, capsys):
        os.environ['WORKBENCH_MAX_DEGREE'] = '2'

        assert cli.ring(p=5, format='json', conf_path=no_conf) == 0

        data = json.loads(capsys.readouterr().out)
        structure = data['structure']
        assert len(structure['odd_generators']) == 4
        assert structure['even_generator']['annihilator'] == 1
        assert data['presentation'] == 'Z_(5)[h1,h2]/(5h1, 5h2, h1^2)'

    def test_max_degree_from_env(self, no_conf, capsys):
        os.environ['WORKBENCH_MAX_DEGREE'] = '2'

        assert cli.ring(p=3, conf_path=no_conf) == 0

        out = capsys.readouterr().out
        assert 'Ext^2' in out
        assert 'Ext^3' not in out

    @pytest.mark.parametrize('params', [
        {'p': 4}, {'p': 2}, {'n': 1}, {'kind': 'lambda'}, {'format': 'xml'},
    ])
    def test_usage_errors(self, no_conf, capsys, params):
        assert cli.ring(conf_path=no_conf, **params) == 2

        captured = capsys.readouterr()
        assert captured.out == ''
        assert captured.err.startswith('error: ')


class TestVerify:
    def test_resolution(self, no_conf, capsys):
        assert cli.verify('resolution', conf_path=no_conf) == 0
        assert '[FAIL]' not in capsys.readouterr().out

    def test_ft16_with_threads(self, no_conf, capsys):
        assert cli.verify('ft16', threads=2, conf_path=no_conf) == 0
        assert '[PASS] Xi equals Lambda^D: true' in \
            capsys.readouterr().out.splitlines()

    def test_unknown_target(self, no_conf, capsys):
        assert cli.verify('everything', conf_path=no_conf) == 2
        assert 'target must be one of' in capsys.readouterr().err


class TestOracle:
    def test_classical(self, no_conf, capsys):
        assert cli.oracle(method='classical', conf_path=no_conf) == 0
        assert '[PASS] classical H^1 equals Ext^1: S/s^1' in \
            capsys.readouterr().out.splitlines()

    def test_unknown_method(self, no_conf, capsys):
        assert cli.oracle(method='guess', conf_path=no_conf) == 2


class TestAppendix:
    def test_conjecture_is_evidence(self, no_conf, capsys):
        assert cli.appendix(p=3, check='conjecture', conf_path=no_conf) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[-1] == '[EVIDENCE] congruence for all tau: ' \
                          'holds for 9 of 9 (expected 9)'

    def test_prime_too_large(self, no_conf, capsys):
        assert cli.appendix(p=11, conf_path=no_conf) == 2
        assert 'exceeds the limit' in capsys.readouterr().err

    def test_unknown_check(self, no_conf):
        assert cli.appendix(check='nothing', conf_path=no_conf) == 2


class TestMain:
    def test_exit_code(self, no_conf, mocker: pytest_mock.MockerFixture):
        mocker.patch.object(sys, 'argv', [
            'galoisties', 'ring', '--p', '4', '--conf_path', no_conf])

        with pytest.raises(SystemExit) as e:
            cli.main()

        assert e.value.code == 2

    def test_json_stdout_is_one_document(self, no_conf, capsys,
                                         mocker: pytest_mock.MockerFixture):
        mocker.patch.object(sys, 'argv', [
            'galoisties', 'ring', '--p', '3', '--format', 'json',
            '--conf_path', no_conf])

        with pytest.raises(SystemExit) as e:
            cli.main()

        assert e.value.code == 0
        data = json.loads(capsys.readouterr().out)
        assert data['command'] == 'ring'

    def test_text_stdout_ends_with_presentation(
            self, no_conf, capsys, mocker: pytest_mock.MockerFixture):
        mocker.patch.object(sys, 'argv', [
            'galoisties', 'ring', '--p', '3', '--conf_path', no_conf])

        with pytest.raises(SystemExit):
            cli.main()

        out = capsys.readouterr().out.splitlines()
        assert out[-1] == 'Z_(3)[h1,h2]/(3h1, 3h2, h1^2)'

    def test_module_entry_point(self, no_conf):
        result = subprocess.run(
            [sys.executable, '-m', 'galoisties', 'ring', '--p', '3',
             '--format', 'json', '--conf_path', no_conf],
            capture_output=True, text=True, env=os.environ.copy())

        assert result.returncode == 0, result.stderr
        assert json.loads(result.stdout)['params']['p'] == '3'
