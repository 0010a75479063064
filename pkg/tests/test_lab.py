from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_csit.errors import InvalidInput, Unsupported
from hybrid_csit.lab import (DEFAULT_GRID, SweepResult, bound_check, check_trial, degenerate_realization,
                             fit_dof, fit_slope, parse_config_key, region_check, verify_decodability,
                             verify_trials)
from hybrid_csit.schemes import pd22

F = Fraction
fractions = st.fractions(min_value=0, max_value=2, max_denominator=12)


# -- region ----------------------------------------------------------------------

def test_region_examples():
    r = region_check((F(1, 2), F(1, 4), F(1, 2)))
    assert r.inside and r.tight == (1, 2, 3) and r.lhs == (1, 2, 2)
    r = region_check((0, 0, 0))
    assert r.inside and r.tight == ()
    r = region_check((1, 0, 1))
    assert not r.inside and 1 in r.violated


def test_region_rejects_negative_and_wrong_length():
    with pytest.raises(InvalidInput):
        region_check((-1, 0, 0))
    with pytest.raises(InvalidInput):
        region_check((0, 0))


@settings(max_examples=200)
@given(st.tuples(fractions, fractions, fractions), st.tuples(fractions, fractions, fractions))
def test_region_scale_monotone(d, extra):
    bigger = tuple(x + e for x, e in zip(d, extra))
    if not region_check(d).inside:
        assert not region_check(bigger).inside


@settings(max_examples=200)
@given(st.tuples(fractions, fractions, fractions))
def test_region_matches_direct_inequalities(d):
    d12, d23, d13 = d
    inside = d12 + d13 <= 1 and 2 * (d12 + d23) + d13 <= 2 and d12 + 2 * (d23 + d13) <= 2
    assert region_check(d).inside == inside


# -- bounds ----------------------------------------------------------------------

def test_bound_examples():
    assert bound_check("PDD(3,3)", F(9, 5)).ok
    assert bound_check("PPD(3,3)", F(9, 4)).ok
    res = bound_check("PDD(2,3)", F(7, 4))
    assert not res.ok and res.bound == F(5, 3)


def test_bound_unknown_config():
    with pytest.raises(Unsupported):
        bound_check("DDD(2,3)", 1)
    with pytest.raises(Unsupported):
        parse_config_key("PDD")
    assert parse_config_key(("pdd", 2, 3)) == ("PDD", 2, 3)


# -- verification ----------------------------------------------------------------

def test_verify_counts():
    assert verify_decodability("pd22", 20) == 20
    assert verify_decodability("ppd33", 20, seed0=50) == 20


def test_verify_rejects_zero_trials():
    with pytest.raises(InvalidInput):
        verify_trials("pd22", 0)


def test_injected_instance_fails():
    real = degenerate_realization(pd22(), 3)
    chk = check_trial(pd22(), 3, real)
    assert not chk.ok and 2 in chk.failing


def test_verify_parallel_matches_serial():
    a = verify_trials("order2_delivery", 12, 0, workers=1)
    b = verify_trials("order2_delivery", 12, 0, workers=3)
    assert a == b


# -- sweeps ---------------------------------------------------------------------------

def test_fit_slope_exact_line():
    grid = [1e2, 1e4, 1e6]
    slope, resid = fit_slope(grid, [3 * np.log2(p) + 1 for p in grid])
    assert slope == pytest.approx(3) and resid == pytest.approx(0, abs=1e-9)


def test_fit_dof_pd22():
    res = fit_dof("pd22", DEFAULT_GRID, trials=20)
    assert res.passed and res.expected == F(3, 2)
    assert res.rates.shape == (3, 2) and res.trials == 20 and res.excluded == []
    assert abs(res.receiver_slopes[0] - 1) < 0.05 and abs(res.receiver_slopes[1] - 0.5) < 0.05


def test_fit_dof_order2_slope_counts_both_receivers():
    res = fit_dof("order2_delivery", DEFAULT_GRID, trials=10)
    assert res.expected == F(5, 2) and res.passed


@pytest.mark.parametrize("grid", [(1e4,), (1e4, 1e6), (1e6, 1e4, 1e8), (0, 1e4, 1e6)])
def test_fit_dof_rejects_bad_grids(grid):
    with pytest.raises(InvalidInput):
        fit_dof("pd22", grid, trials=2)


def test_sweep_result_invariants():
    with pytest.raises(InvalidInput):
        SweepResult("x", (1.0, 1.0, 2.0), 2, np.zeros((3, 2)), 1, [], 0.0, 0.0, (0.0, 0.0), F(1))
    with pytest.raises(InvalidInput):
        SweepResult("x", (1.0, 2.0, 3.0), 2, np.zeros((3, 2)), 0, [], 0.0, 0.0, (0.0, 0.0), F(1))


def test_csv_layout():
    res = fit_dof("pd22", DEFAULT_GRID, trials=3)
    lines = res.to_csv().splitlines()
    assert lines[0] == "scheme,P_T,trial_mean_sum_rate,r1,r2,r3,slope_fit"
    row = lines[1].split(",")
    assert row[0] == "pd22" and float(row[1]) == 1e4 and row[5] == ""
    assert float(row[2]) == pytest.approx(float(row[3]) + float(row[4]))


def test_sweep_parallel_is_bitwise_identical():
    a = fit_dof("ppd33", DEFAULT_GRID, trials=8, workers=1)
    b = fit_dof("ppd33", DEFAULT_GRID, trials=8, workers=4)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()
