import math

import pytest

from core.bounds import lambda1_bounds
from core.sweep import SOLVER_COLUMNS, SweepProcessor, sweep_columns, sweep_row


def test_columns_are_the_same_for_every_dimension():
    columns = sweep_columns(2)
    assert columns[:len(SOLVER_COLUMNS)] == SOLVER_COLUMNS
    assert columns == sweep_columns(5)
    for report in lambda1_bounds(2, 1.0):
        assert report.name in columns
        assert f"{report.name}_valid" in columns


def test_row_in_dimension_three():
    row = sweep_row(3, 2.0)
    assert row['lambda1'] == pytest.approx(1 + math.pi ** 2 / 4, rel=1e-9)
    assert row['gap'] == pytest.approx(row['lambda2'] - row['lambda1'])
    assert row['r3_gap'] == pytest.approx(8 * row['gap'])
    assert row['lambda1_exact_n3_valid'] is True
    assert set(row) == set(sweep_columns(3))


def test_rows_follow_radius_order():
    radii = [2.0, 0.5, 1.0]
    rows = SweepProcessor(workers=2).run(3, radii)
    assert [row['r'] for row in rows] == radii
    assert [row['lambda1'] for row in rows] == pytest.approx(
        [1 + math.pi ** 2 / r ** 2 for r in radii], rel=1e-9)


def test_pool_matches_serial():
    radii = [0.5, 1.0]
    serial = SweepProcessor(workers=1).run(2, radii)
    pooled = SweepProcessor(workers=2).run(2, radii)
    assert serial == pooled


def test_invalid_worker_count():
    with pytest.raises(ValueError):
        SweepProcessor(workers=0)
