import math

import pytest
from hypothesis import given, strategies as st

from core.bounds import (
    BoundReport,
    bracket,
    gap_bounds,
    gap_constant,
    gap_reports,
    lambda1_alpha_upper,
    lambda1_bounds,
    lambda2_bounds,
    rayleigh_upper,
    sandwich,
)


def by_name(reports):
    return {report.name: report for report in reports}


def test_exact_value_in_dimension_three():
    exact = by_name(lambda1_bounds(3, 2.0))['lambda1_exact_n3']
    assert exact.valid
    assert exact.kind == 'exact'
    assert exact.value == pytest.approx(3.4674011003, rel=1e-10)


def test_gage_bound_in_the_plane():
    gage = by_name(lambda1_bounds(2, 1.0))['lambda1_upper_gage']
    assert gage.valid
    assert gage.value == pytest.approx(9.93859, abs=1e-5)


@pytest.mark.parametrize("n, valid", [
    (2, {'lambda1_lower_savo', 'lambda1_upper_gage', 'lambda1_upper_via_lambda2'}),
    (3, {'lambda1_lower_savo', 'lambda1_upper_rayleigh', 'lambda1_upper_via_lambda2',
         'lambda1_exact_n3'}),
    (5, {'lambda1_lower_schrodinger', 'lambda1_lower_savo', 'lambda1_upper_rayleigh',
         'lambda1_upper_via_lambda2'}),
])
def test_validity_flags(n, valid):
    reports = lambda1_bounds(n, 1.5)
    assert len(reports) == 6
    assert {report.name for report in reports if report.valid} == valid


def test_rayleigh_bound_degenerates_in_dimension_three():
    reports = by_name(lambda1_bounds(3, 2.0))
    assert not reports['lambda1_upper_rayleigh'].strict
    assert reports['lambda1_upper_rayleigh'].value == pytest.approx(
        reports['lambda1_exact_n3'].value, rel=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
@pytest.mark.parametrize("k", [0.5, 2.0])
def test_bounds_follow_curvature_scaling(n, k):
    r = 1.3
    scaled = lambda1_bounds(n, r, k) + lambda2_bounds(n, r, k)
    base = lambda1_bounds(n, k * r) + lambda2_bounds(n, k * r)
    for a, b in zip(scaled, base):
        assert a.name == b.name
        assert a.value == pytest.approx(k * k * b.value, rel=1e-13)


def test_gap_constant_in_the_plane():
    assert gap_constant(2) == pytest.approx(math.pi ** 4 / 4 + 4 * math.pi ** 2, rel=1e-15)
    assert gap_constant(2) == pytest.approx(63.83069, abs=1e-5)


def test_gap_upper_is_difference_of_eigenvalue_bounds():
    for n in (2, 3, 5):
        for R in (0.5, 2.0, 10.0):
            upper_2 = by_name(lambda2_bounds(n, R))['lambda2_upper_rayleigh'].value
            lower_1 = by_name(lambda1_bounds(n, R))['lambda1_lower_savo'].value
            _, upper, C_n = gap_bounds(n, R)
            assert upper == pytest.approx(upper_2 - lower_1, rel=1e-12)
            assert upper == pytest.approx(C_n / R ** 3, rel=1e-15)


def test_gap_bounds_scale_with_curvature():
    lower, upper, _ = gap_bounds(3, 2.0, 3.0)
    base_lower, base_upper, _ = gap_bounds(3, 6.0)
    assert lower == pytest.approx(9 * base_lower)
    assert upper == pytest.approx(9 * base_upper)


def test_gap_reports_order():
    lower, upper = gap_reports(2, 5.0)
    assert (lower.kind, upper.kind) == ('lower', 'upper')
    assert lower.value < upper.value


@given(st.integers(min_value=2, max_value=8),
       st.floats(min_value=0.0, max_value=12.0),
       st.floats(min_value=0.1, max_value=30.0))
def test_rayleigh_quotient_below_closed_form(n, alpha, r):
    base = (n - 1) ** 2 / 4 + math.pi ** 2 / r ** 2
    quotient = rayleigh_upper(n, alpha, r)
    closed = lambda1_alpha_upper(n, alpha, r)
    assert base <= quotient <= closed * (1 + 1e-12)


@given(st.integers(min_value=2, max_value=8), st.floats(min_value=0.05, max_value=40.0))
def test_first_eigenvalue_bounds_are_ordered(n, r):
    lower, upper = bracket(lambda1_bounds(n, r))
    assert lower <= upper


def test_negative_alpha_rejected():
    with pytest.raises(ValueError):
        lambda1_alpha_upper(3, -1.0, 1.0)
    with pytest.raises(ValueError):
        rayleigh_upper(3, -1.0, 1.0)


@pytest.mark.parametrize("n, r, k", [(1, 1.0, 1.0), (2, 0.0, 1.0), (2, 1.0, -1.0)])
def test_invalid_arguments(n, r, k):
    with pytest.raises(ValueError):
        lambda1_bounds(n, r, k)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        BoundReport('x', 'sideways', 1.0, True, 'none')


def test_bracket_skips_invalid_bounds():
    reports = [
        BoundReport('a', 'lower', 1.0, True, ''),
        BoundReport('b', 'lower', 5.0, False, ''),
        BoundReport('c', 'upper', 3.0, True, ''),
        BoundReport('d', 'upper', 2.5, True, ''),
    ]
    assert bracket(reports) == (1.0, 2.5)
    assert bracket(reports[:2]) == (1.0, None)


def test_sandwich_margins():
    reports = [
        BoundReport('low', 'lower', 1.0, True, ''),
        BoundReport('high', 'upper', 2.0, True, ''),
        BoundReport('eq', 'exact', 1.5, True, '', strict=False),
    ]
    margin, name = sandwich(reports, 1.5, 0.01)
    assert name == 'eq'
    assert margin == pytest.approx(1.5e-8)

    margin, name = sandwich(reports[:2], 1.9, 0.001)
    assert name == 'high'
    assert margin == pytest.approx(0.1 - 0.01)

    margin, _ = sandwich(reports[:2], 2.1, 0.0)
    assert margin < 0


@pytest.mark.parametrize("n", [2, 3, 6])
def test_lambda1_upper_inherited_from_second_eigenvalue(n):
    first = by_name(lambda1_bounds(n, 2.5, 1.5))['lambda1_upper_via_lambda2']
    second = by_name(lambda2_bounds(n, 2.5, 1.5))['lambda2_upper_rayleigh']
    assert first.valid and first.strict
    assert first.value == second.value
