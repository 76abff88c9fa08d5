import json
import math

import pytest

from config.config import SolverConfig, VerifyConfig
from core.eigensolve import BallSpec
from core.verify import (
    CheckResult,
    VerificationRunner,
    default_grid,
    report_to_json,
    run_all,
)


@pytest.fixture(scope="module")
def runner():
    return VerificationRunner(SolverConfig(), VerifyConfig())


def test_default_grid_covers_dimensions_and_radii():
    grid = default_grid()
    assert len(grid) == 35
    assert BallSpec(2, 1.0, 0.25) in grid
    assert BallSpec(6, 1.0, 20.0) in grid


def test_minimal_exactness_run():
    results = run_all([BallSpec(3, 1.0, 2.0)], checks=['n3_exactness'])
    assert len(results) == 1
    result = results[0]
    assert result.check_name == 'n3_exactness'
    assert result.passed
    assert 0 < result.margin <= 1e-8 * (1 + math.pi ** 2 / 4)
    assert 'r=2.0' in result.worst_case


@pytest.mark.parametrize("check", [
    'quadrature_constant',
    'bm_excess_bound',
    'small_ball_lambda1',
    'small_ball_gap',
    'scaling_invariance',
])
def test_single_checks_pass(runner, check):
    result, = runner.run([BallSpec(2, 1.0, 1.0)], [check])
    assert result.passed, result
    assert result.margin > 0
    assert result.error is None


def test_sandwich_and_oracle_on_a_small_grid(runner):
    grid = [BallSpec(n, 1.0, r) for n in (2, 3, 5) for r in (0.5, 5.0)]
    results = runner.run(grid, ['sandwich_lambda1', 'sandwich_lambda2', 'gap_sandwich',
                                'oracle_equivalence'])
    for result in results:
        assert result.passed, result
    assert results[3].points == 2 * len(grid)


def test_gap_decay_in_the_plane(runner):
    result, = runner.run([BallSpec(2, 1.0, 1.0)], ['gap_decay'])
    assert result.passed, result


def test_eigenvalues_are_cached(runner):
    first = runner.eigen(2, 1.0, 0)
    assert runner.eigen(2, 1.0, 0) is first


def test_failed_check_is_reported_not_raised():
    strict = VerifyConfig(small_ball_tolerance=1e-12)
    result, = run_all([BallSpec(2, 1.0, 1.0)], verify_config=strict,
                      checks=['small_ball_lambda1'])
    assert not result.passed
    assert result.margin < 0
    assert result.worst_case.startswith('n=')


def test_solver_errors_become_failures():
    result, = run_all([BallSpec(3, 1.0, 1e-5)], checks=['n3_exactness'])
    assert not result.passed
    assert result.margin == -math.inf
    assert 'degenerate' in result.error


def test_empty_grid_and_unknown_checks_rejected():
    with pytest.raises(ValueError):
        run_all([])
    with pytest.raises(ValueError, match="Unknown checks"):
        run_all([BallSpec(2, 1.0, 1.0)], checks=['nonsense'])


def test_report_json_round_trip():
    results = [
        CheckResult('a', True, 'n=2, r=1.0', 0.5, 3),
        CheckResult('b', False, 'n=3, r=0.5', -math.inf, 1, 'SolverError: boom'),
    ]
    data = json.loads(report_to_json(results))
    assert [row['check_name'] for row in data] == ['a', 'b']
    assert data[0]['margin'] == 0.5
    assert data[1]['margin'] is None
    assert set(data[0]) == {'check_name', 'passed', 'worst_case', 'margin', 'points', 'error'}


def test_reports_are_deterministic():
    grid = [BallSpec(3, 1.0, 2.0)]
    names = ['n3_exactness', 'quadrature_constant']
    assert report_to_json(run_all(grid, checks=names)) == report_to_json(run_all(grid, checks=names))


@pytest.mark.slow
def test_full_default_suite_passes():
    results = run_all(default_grid())
    assert [result.check_name for result in results] == list(VerificationRunner.CHECK_NAMES)
    failed = [result for result in results if not result.passed]
    assert not failed, failed


def test_too_few_samples_for_log_concavity_is_a_failure():
    config = SolverConfig(sample_count=3)
    verify = VerifyConfig(log_concavity_dimensions=[2], log_concavity_radii=[1.0])
    result, = run_all([BallSpec(2, 1.0, 1.0)], config, verify, checks=['log_concavity'])
    assert not result.passed
    assert result.margin == -math.inf
    assert 'interior samples' in result.error
