import math
from fractions import Fraction

import pytest

from lyness import DomainError, LynessParams
from lyness.rotation import (
    estimate_rotation,
    expected_trend,
    log_grid,
    monotonicity_report,
    RotationEstimate,
    rho_asymptotic,
    rho_bounds,
    rho_limit_at_minimum,
    scan_rho,
)


def test_alpha_one_is_exactly_one_fifth():
    est = estimate_rotation(LynessParams(1.0), 30.0, 10_000)
    assert est.rho == pytest.approx(0.2, abs=1e-12)
    assert est.stderr_bound == 1e-4
    # every step advances by less than a full turn
    assert 0 < est.min_advance <= est.max_advance < 2 * math.pi


def test_rotation_seed_and_level_agree():
    params = LynessParams(2.0)
    a = estimate_rotation(params, seed=(1.0, 5.0), n_iters=20_000)
    b = estimate_rotation(params, a.v, 20_000)
    assert abs(a.rho - b.rho) <= a.stderr_bound + b.stderr_bound
    with pytest.raises(DomainError):
        estimate_rotation(params, a.v * 2, 20_000, seed=(1.0, 5.0))


def test_rotation_rejects_bad_input():
    params = LynessParams(2.0)
    with pytest.raises(ValueError):
        estimate_rotation(params, 40.0, 10)
    with pytest.raises(DomainError):
        estimate_rotation(params, params.v_min)
    with pytest.raises(DomainError):
        estimate_rotation(params, 1.0, 10_000)


def test_refinement_finds_rational_rotation():
    est = estimate_rotation(LynessParams(1.0), 50.0, 10_000, refine=True)
    assert est.rational == Fraction(1, 5)
    est = estimate_rotation(LynessParams(0.0), 50.0, 10_000, refine=True)
    assert est.rational == Fraction(1, 6)


def test_limit_at_minimum_matches_linearization():
    # rotation angle of the Jacobian [[0, 1], [-1, 1/w]]: trace = 2 cos(theta)
    for a in (0.0, 0.3, 1.0, 6.0, 50.0):
        params = LynessParams(a)
        theta = math.acos(0.5 / params.omega)
        assert rho_limit_at_minimum(params) == pytest.approx(theta / (2 * math.pi), rel=1e-14)
    assert rho_limit_at_minimum(LynessParams(1.0)) == pytest.approx(0.2, abs=1e-15)
    assert rho_limit_at_minimum(LynessParams(0.0)) == pytest.approx(1 / 6, abs=1e-15)


def test_asymptotic_formula():
    assert rho_asymptotic(LynessParams(1.0), 1e5) == pytest.approx(0.2)
    assert rho_asymptotic(LynessParams(6.0), 1e6) > 0.2
    with pytest.raises(DomainError):
        rho_asymptotic(LynessParams(0.0), 100.0)
    with pytest.raises(DomainError):
        rho_asymptotic(LynessParams(6.0), 10.0)


def test_bounds_and_trend():
    lo = rho_bounds(LynessParams(0.5))
    hi = rho_bounds(LynessParams(3.0))
    assert (lo.lo, lo.hi) == (Fraction(1, 6), Fraction(1, 5))
    assert (hi.lo, hi.hi) == (Fraction(1, 5), Fraction(1, 4))
    assert 0.19 in lo and 0.2 not in lo
    assert expected_trend(LynessParams(0.5)) == "increasing"
    assert expected_trend(LynessParams(3.0)) == "decreasing"
    assert expected_trend(LynessParams(1.0)) == "constant"
    with pytest.raises(DomainError):
        rho_bounds(LynessParams(1.0))


def _fake(rhos, err=1e-3):
    return [RotationEstimate(r, 1000, err, 1.0, 10.0 + i) for i, r in enumerate(rhos)]


def test_monotonicity_report_verdicts():
    assert monotonicity_report(_fake([0.1, 0.11, 0.12]), "increasing").verdict == "strictly increasing"
    rep = monotonicity_report(_fake([0.1, 0.1005, 0.12]), "increasing")
    assert rep.verdict == "monotone up to estimator error"
    assert rep.indistinguishable == [0]
    rep = monotonicity_report(_fake([0.1, 0.12, 0.11]), "increasing")
    assert rep.verdict == "not monotone"
    assert [p.index for p in rep.violations] == [1]
    assert monotonicity_report([], "increasing").verdict == "empty"


def test_scan_small_grid_and_workers_agree():
    params = LynessParams(6.0)
    grid = log_grid(params.v_min * 1.01, 1e3, 4)
    serial = scan_rho(params, grid, 5_000, workers=1)
    pooled = scan_rho(params, grid, 5_000, workers=2)
    assert [e.rho for e in serial.estimates] == [e.rho for e in pooled.estimates]
    assert serial.report.expected == "decreasing"
    with pytest.raises(DomainError):
        scan_rho(params, grid[::-1], 5_000)


def test_threads_env(monkeypatch):
    from lyness.rotation import default_workers

    monkeypatch.setenv("LYNESS_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("LYNESS_THREADS", "x")
    with pytest.raises(DomainError):
        default_workers()


def test_seed_independence():
    params = LynessParams(0.5)
    curve_v = 30.0
    from lyness.invariant import curve_point_at_angle

    p1 = curve_point_at_angle(params, curve_v, 0.3)
    p2 = curve_point_at_angle(params, curve_v, 4.0)
    e1 = estimate_rotation(params, curve_v, 50_000, seed=tuple(p1))
    e2 = estimate_rotation(params, curve_v, 50_000, seed=tuple(p2))
    assert abs(e1.rho - e2.rho) <= 2 * (e1.stderr_bound + e2.stderr_bound)


def test_rational_rotation_implies_periodicity():
    from lyness.periodic import special_level

    for period, alpha in ((9, 6.0), (11, 0.2)):
        level = special_level(period, alpha)
        est = estimate_rotation(level.params, level.v_bar, 10**6)
        frac = Fraction(est.rho).limit_denominator(30)
        assert abs(float(frac) - est.rho) < 1e-7
        x = y = level.lambda_far
        for _ in range(frac.denominator):
            x, y = y, (alpha + y) / x
        assert math.hypot(x - level.lambda_far, y - level.lambda_far) / (math.sqrt(2) * level.lambda_far) < 1e-5


def test_limit_at_critical_nine():
    from lyness.periodic import critical_alpha

    assert rho_limit_at_minimum(LynessParams(critical_alpha(9))) == pytest.approx(2 / 9, abs=1e-12)
