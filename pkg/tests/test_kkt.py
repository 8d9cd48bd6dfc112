import dataclasses

import numpy as np
import pytest

from poisson_capacity import (ChannelParams, InputDistribution, ba_run, kkt_update, kkt_validate, solve,
                              truncation_for)


@pytest.fixture
def a4():
    params = ChannelParams(4.0, 0.0)
    return params, truncation_for(params, margin=10)


def _report(template, **changes):
    return dataclasses.replace(template, **changes)


def test_binary_optimum_below_threshold_is_valid():
    params = ChannelParams(3.0, 0.0)
    trunc = truncation_for(params, margin=10)
    d = ba_run(InputDistribution.uniform([0.0, 3.0]), 1000, params, trunc)
    report = kkt_validate(d, 1e-6, params, trunc)
    assert report.valid
    assert abs(report.max_density - report.density_at_zero) <= 1e-6
    assert report.violating_points.size == 0


def test_binary_above_threshold_is_rejected(a4):
    params, trunc = a4
    d = ba_run(InputDistribution.uniform([0.0, 4.0]), 1000, params, trunc)
    report = kkt_validate(d, 1e-6, params, trunc)
    assert not report.valid
    assert report.exterior_violation and not report.support_violation
    assert 0.5 < report.candidate_x < 3.5
    assert report.max_density > report.density_at_zero + 1e-6


def test_point_mass_is_rejected():
    params = ChannelParams(2.0, 1.0)
    trunc = truncation_for(params, margin=10)
    report = kkt_validate(InputDistribution([0.0], [1.0]), 1e-6, params, trunc)
    assert not report.valid and report.exterior_violation
    assert report.density_at_zero == 0.0
    assert report.candidate_x == pytest.approx(2.0)


def test_validation_is_deterministic(a4):
    params, trunc = a4
    d = InputDistribution([0.0, 1.3, 4.0], [0.4, 0.2, 0.4])
    r1, r2 = kkt_validate(d, 1e-6, params, trunc), kkt_validate(d, 1e-6, params, trunc)
    assert r1.candidate_x == r2.candidate_x and r1.max_density == r2.max_density
    np.testing.assert_array_equal(r1.profile.grid_values, r2.profile.grid_values)


def test_epsilon_must_be_positive(a4):
    params, trunc = a4
    with pytest.raises(ValueError):
        kkt_validate(InputDistribution.uniform([0.0, 4.0]), 0.0, params, trunc)


def test_insert_rule(a4):
    params, trunc = a4
    d = InputDistribution([0.0, 4.0], [0.55, 0.45])
    base = kkt_validate(d, 1e-6, params, trunc)
    report = _report(base, candidate_x=1.7, exterior_violation=True, support_violation=False, valid=False)
    out = kkt_update(d, report, params, trunc)
    np.testing.assert_array_equal(out.points, [0.0, 1.7, 4.0])
    np.testing.assert_allclose(out.probs, [1 / 3] * 3)


def test_merge_rule(a4):
    params, trunc = a4
    d = InputDistribution([0.0, 1.62, 1.68, 4.0], [0.4, 0.1, 0.05, 0.45])
    base = kkt_validate(d, 1e-6, params, trunc)
    report = _report(base, candidate_x=1.65, exterior_violation=True, support_violation=True, valid=False,
                     violating_points=np.array([1.62, 1.68]))
    out = kkt_update(d, report, params, trunc)
    np.testing.assert_array_equal(out.points, [0.0, 1.65, 4.0])
    np.testing.assert_allclose(out.probs, [0.4, 0.15, 0.45])
    assert out.size == d.size - 1


def test_merge_picks_closest_pair(a4):
    params, trunc = a4
    d = InputDistribution([0.0, 1.60, 1.64, 1.66, 4.0], [0.3, 0.1, 0.1, 0.1, 0.4])
    base = kkt_validate(d, 1e-6, params, trunc)
    report = _report(base, candidate_x=1.65, exterior_violation=True, support_violation=True, valid=False,
                     violating_points=np.array([1.60, 1.64, 1.66]))
    out = kkt_update(d, report, params, trunc)
    np.testing.assert_allclose(out.points, [0.0, 1.60, 1.65, 4.0])
    np.testing.assert_allclose(out.probs, [0.3, 0.1, 0.2, 0.4])


def test_merge_needs_bracketing_and_delta(a4):
    params, trunc = a4
    d = InputDistribution([0.0, 1.5, 1.7, 4.0], [0.3, 0.2, 0.1, 0.4])
    base = kkt_validate(d, 1e-6, params, trunc)
    # gap 0.2 >= delta: falls back to insertion
    report = _report(base, candidate_x=1.6, exterior_violation=True, support_violation=True, valid=False,
                     violating_points=np.array([1.5, 1.7]))
    out = kkt_update(d, report, params, trunc)
    np.testing.assert_array_equal(out.points, [0.0, 1.5, 1.6, 1.7, 4.0])
    np.testing.assert_allclose(out.probs, [0.2] * 5)


def test_support_only_violation_polishes_probabilities(a4):
    params, trunc = a4
    d = InputDistribution([0.0, 1.4, 4.0], [0.6, 0.1, 0.3])
    base = kkt_validate(d, 1e-6, params, trunc)
    report = _report(base, exterior_violation=False, support_violation=True, valid=False)
    out = kkt_update(d, report, params, trunc, n_ba=100)
    np.testing.assert_array_equal(out.points, d.points)
    np.testing.assert_allclose(out.probs, ba_run(d, 100, params, trunc).probs)


def test_colliding_candidate_is_not_inserted(a4):
    params, trunc = a4
    d = InputDistribution([0.0, 1.4, 4.0], [0.5, 0.1, 0.4])
    base = kkt_validate(d, 1e-6, params, trunc)
    report = _report(base, candidate_x=1.405, exterior_violation=True, support_violation=False, valid=False)
    out = kkt_update(d, report, params, trunc, min_spacing=0.01)
    np.testing.assert_array_equal(out.points, d.points)


def test_update_rejects_valid_report():
    params = ChannelParams(3.0, 0.0)
    trunc = truncation_for(params, margin=10)
    res = solve(params)
    with pytest.raises(ValueError):
        kkt_update(res.distribution, res.kkt, params, trunc)


@pytest.mark.parametrize("amp, lam", [(5.0, 0.0), (12.0, 1.0)])
def test_valid_reports_are_anchor_consistent(amp, lam):
    res = solve(ChannelParams(amp, lam))
    k = res.kkt
    assert k.valid
    assert k.max_density - k.density_at_zero <= k.epsilon
    assert np.all(np.abs(k.profile.at_support - k.density_at_zero) <= k.epsilon)
