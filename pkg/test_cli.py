import csv
import io
import json
import math

import pytest

from cli import EXIT_IO, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, EXIT_VERIFY_FAILED, main
from core.sweep import sweep_row


def run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for key in ('HYPERGAP_LAMBDA_REL_TOL', 'HYPERGAP_MAX_BISECTION_STEPS', 'HYPERGAP_CONFIG_DIR'):
        monkeypatch.delenv(key, raising=False)


def test_no_arguments_prints_help():
    code, out, err = run()
    assert code == EXIT_USAGE
    assert out == ''
    assert 'Available Commands' in err
    assert 'Examples:' in err
    assert 'hypergap sweep --preset decay --format json' in err


def test_eig_text_in_dimension_three():
    code, out, _ = run('eig', '--n', '3', '--r', '2')
    assert code == EXIT_OK
    assert 'lambda1 = 3.467401100' in out
    assert 'lambda1_exact_n3' in out


def test_eig_json_with_curvature():
    code, out, _ = run('eig', '--n', '3', '--k', '2', '--r', '1', '--format', 'json')
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload['lambda1'] == pytest.approx(4 + math.pi ** 2, rel=1e-9)
    assert payload['gap'] == pytest.approx(payload['lambda2'] - payload['lambda1'])
    assert {bound['name'] for bound in payload['bounds']} >= {'lambda1_exact_n3', 'gap_upper_cubic'}


@pytest.mark.parametrize("argv, message", [
    (('eig', '--n', '2', '--r', '0'), 'radius must be positive'),
    (('eig', '--n', '1', '--r', '1'), 'dimension'),
    (('eig', '--n', '2'), 'required'),
    (('horoconvex', '--n', '2', '--D', '2'), '4 ln 2'),
    (('sweep', '--preset', 'nonexistent'), 'Unknown preset'),
    (('verify', '--checks', 'nonsense'), 'Unknown checks'),
    (('history',), '--store'),
    (('eig', '--n', '2', '--r', '1', '--tol-rel', '-1'), 'lambda_rel_tol'),
])
def test_usage_errors(argv, message):
    code, out, err = run(*argv)
    assert code == EXIT_USAGE
    assert message in err
    assert out == ''


def test_invalid_environment_is_a_usage_error(monkeypatch):
    monkeypatch.setenv('HYPERGAP_LAMBDA_REL_TOL', '-1')
    code, _, err = run('eig', '--n', '2', '--r', '1')
    assert code == EXIT_USAGE
    assert 'lambda_rel_tol' in err


def test_solver_failure_exit_code(monkeypatch):
    monkeypatch.setenv('HYPERGAP_MAX_BISECTION_STEPS', '1')
    code, _, err = run('eig', '--n', '2', '--r', '1')
    assert code == EXIT_SOLVER
    assert 'converge' in err


def test_horoconvex_certificate_json():
    code, out, _ = run('horoconvex', '--n', '2', '--D', '10', '--format', 'json', '--no-reference')
    assert code == EXIT_OK
    certificate = json.loads(out)
    assert certificate['certified_bound'] == pytest.approx(4.08516, abs=1e-4)
    assert certificate['reference_numeric_gap'] is None


def test_sweep_writes_csv(tmp_path):
    target = tmp_path / "sweep.csv"
    code, out, _ = run('sweep', '--n', '3', '--r-min', '0.5', '--r-max', '2',
                       '--points', '3', '--scale', 'linear', '--out', str(target))
    assert code == EXIT_OK
    assert out == ''
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert [float(row['r']) for row in rows] == [0.5, 1.25, 2.0]
    for row in rows:
        r = float(row['r'])
        assert float(row['lambda1']) == pytest.approx(1 + math.pi ** 2 / r ** 2, rel=1e-9)
        assert row['lambda1_exact_n3_valid'] == 'true'
    assert not list(tmp_path.glob('*.tmp'))


def test_sweep_preset_to_stdout():
    code, out, _ = run('sweep', '--preset', 'degenerate', '--points', '2')
    assert code == EXIT_OK
    lines = out.strip().split('\n')
    assert len(lines) == 3
    assert lines[0].startswith('n,k,r,lambda1,')


def test_unwritable_output_is_an_io_error(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("")
    code, _, err = run('sweep', '--n', '3', '--r-min', '1', '--r-max', '2', '--points', '2',
                       '--out', str(blocker / "sweep.csv"))
    assert code == EXIT_IO
    assert 'I/O error' in err


def test_verify_minimal_grid():
    code, out, _ = run('verify', '--grid-n', '3', '--grid-r', '2', '--checks', 'n3_exactness')
    assert code == EXIT_OK
    report = json.loads(out)
    assert len(report) == 1
    assert report[0]['check_name'] == 'n3_exactness'
    assert report[0]['passed'] is True


def test_verify_failure_exit_code():
    code, out, _ = run('verify', '--grid-n', '3', '--grid-r', '1e-5', '--checks', 'n3_exactness')
    assert code == EXIT_VERIFY_FAILED
    report = json.loads(out)
    assert report[0]['passed'] is False
    assert report[0]['margin'] is None


def test_history_of_archived_runs(tmp_path):
    db = str(tmp_path / "runs.db")
    assert run('eig', '--n', '3', '--r', '2', '--store', db)[0] == EXIT_OK
    assert run('horoconvex', '--n', '2', '--D', '10', '--no-reference', '--store', db)[0] == EXIT_OK

    code, out, _ = run('history', '--store', db)
    assert code == EXIT_OK
    lines = out.strip().split('\n')
    assert 'horoconvex' in lines[0]
    assert 'eig' in lines[1]

    code, out, _ = run('history', '--store', db, '--show', '1')
    assert code == EXIT_OK
    assert json.loads(out)[0]['payload']['lambda1'] == pytest.approx(1 + math.pi ** 2 / 4)

    assert run('history', '--store', db, '--delete', '1')[0] == EXIT_OK
    code, _, err = run('history', '--store', db, '--show', '1')
    assert code == EXIT_USAGE
    assert 'not found' in err


def test_sweep_is_deterministic_with_fixed_precision():
    argv = ('sweep', '--n', '3', '--r-min', '0.5', '--r-max', '2', '--points', '3',
            '--scale', 'linear', '--workers', '2')
    code, first, _ = run(*argv)
    assert code == EXIT_OK
    _, second, _ = run(*argv)
    assert first == second

    rows = list(csv.DictReader(io.StringIO(first)))
    assert [row['r'] for row in rows] == ['0.5', '1.25', '2']
    assert rows[0]['lambda1'] == '%.12g' % sweep_row(3, 0.5)['lambda1']
    for row in rows:
        for column in ('lambda1', 'lambda2', 'gap', 'r3_gap'):
            assert row[column] == '%.12g' % float(row[column])


def test_sweep_json_format():
    code, out, _ = run('sweep', '--n', '3', '--r-min', '1', '--r-max', '2', '--points', '2',
                       '--format', 'json')
    assert code == EXIT_OK
    rows = json.loads(out)
    assert [row['r'] for row in rows] == [1.0, 2.0]
    assert rows[0]['lambda1'] == pytest.approx(1 + math.pi ** 2, rel=1e-8)
    assert rows[0]['lambda1_exact_n3_valid'] is True


def test_unknown_config_setting_is_a_usage_error(tmp_path, monkeypatch):
    (tmp_path / "config.yml").write_text("solver:\n  lambda_rel_tolerance: 1e-9\n")
    monkeypatch.setenv('HYPERGAP_CONFIG_DIR', str(tmp_path))
    code, out, err = run('eig', '--n', '2', '--r', '1')
    assert code == EXIT_USAGE
    assert out == ''
    assert 'lambda_rel_tolerance' in err
