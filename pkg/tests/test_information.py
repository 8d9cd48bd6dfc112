import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import mi_two_entropies, random_instance
from poisson_capacity import (ChannelParams, DomainError, InputDistribution, capacity_sandwich, density_profile,
                              induced_output, info_density, mutual_information, truncation_for)

# 40-digit mpmath sums over k < 80 for the uniform pmf on {0, 1}
I0_LAM0 = 0.37988549304172247537
I1_LAM0 = 0.21002520484387618334
MI_LAM0 = 0.29495534894279932936
MI_LAM1 = 0.07870919979452671426


def test_density_examples(uniform01):
    params, dist, trunc = uniform01
    out = induced_output(dist, params, trunc)
    assert info_density(0.0, dist, out, params, trunc) == pytest.approx(-math.log((1 + math.exp(-1)) / 2), abs=1e-14)
    assert info_density(0.0, dist, out, params, trunc) == pytest.approx(I0_LAM0, abs=1e-14)
    assert info_density(1.0, dist, out, params, trunc) == pytest.approx(I1_LAM0, abs=1e-12)
    with pytest.raises(DomainError):
        info_density(1.5, dist, out, params, trunc)


def test_density_of_single_point_is_zero():
    params = ChannelParams(4.0, 1.0)
    trunc = truncation_for(params)
    dist = InputDistribution([2.0], [1.0])
    out = induced_output(dist, params, trunc)
    assert info_density(2.0, dist, out, params, trunc) == pytest.approx(0.0, abs=1e-15)
    assert mutual_information(dist, params, trunc) == pytest.approx(0.0, abs=1e-15)


def test_mutual_information_examples(uniform01):
    params, dist, trunc = uniform01
    assert mutual_information(dist, params, trunc) == pytest.approx(MI_LAM0, abs=1e-12)
    dark = ChannelParams(1.0, 1.0)
    mi_dark = mutual_information(dist, dark, truncation_for(dark, margin=10))
    assert mi_dark == pytest.approx(MI_LAM1, abs=1e-12)
    assert mi_dark < MI_LAM0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 30), st.sampled_from([0.0, 1.0, 10.0]), st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_mi_matches_entropy_difference(amp, lam, n, seed):
    params = ChannelParams(amp, lam)
    trunc = truncation_for(params, margin=10)
    dist = random_instance(np.random.default_rng(seed), amp, lam, n)
    ours = mutual_information(dist, params, trunc)
    other = mi_two_entropies(dist.points, dist.probs, amp, lam, trunc.k_max)
    assert ours == pytest.approx(other, abs=1e-10)
    assert ours >= 0


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 20), st.sampled_from([0.0, 1.0, 10.0]), st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_densities_nonnegative_and_sandwich_ordered(amp, lam, n, seed):
    params = ChannelParams(amp, lam)
    trunc = truncation_for(params, margin=10)
    dist = random_instance(np.random.default_rng(seed), amp, lam, n)
    profile = density_profile(dist, params, trunc)
    assert profile.grid[0] == 0.0 and profile.grid[-1] == amp
    assert np.all(profile.grid_values >= -1e-9)
    lower, upper = capacity_sandwich(dist, profile)
    assert lower <= upper + 1e-9
    assert lower == pytest.approx(mutual_information(dist, params, trunc), abs=1e-13)


def test_sandwich_single_point_and_degenerate():
    params = ChannelParams(2.0, 1.0)
    trunc = truncation_for(params, margin=10)
    dist = InputDistribution([0.0], [1.0])
    lower, upper = capacity_sandwich(dist, density_profile(dist, params, trunc))
    out = induced_output(dist, params, trunc)
    assert lower == 0.0
    assert upper == pytest.approx(info_density(2.0, dist, out, params, trunc), abs=1e-12)
    assert upper > 0

    zero = ChannelParams(0.0, 3.0)
    d0 = InputDistribution([0.0], [1.0])
    assert capacity_sandwich(d0, density_profile(d0, zero, truncation_for(zero))) == (0.0, 0.0)


def test_sandwich_infinite_for_point_mass_output():
    params = ChannelParams(2.0, 0.0)
    dist = InputDistribution([0.0], [1.0])
    profile = density_profile(dist, params, truncation_for(params))
    assert profile.max_density == math.inf and profile.argmax == 2.0


def test_profile_refines_beyond_grid():
    params = ChannelParams(4.0, 0.0)
    trunc = truncation_for(params, margin=10)
    dist = InputDistribution.uniform([0.0, 4.0])
    profile = density_profile(dist, params, trunc)
    assert profile.max_density >= profile.grid_values.max()
    out = induced_output(dist, params, trunc)
    h = 1e-6
    x = profile.argmax
    if 0 < x < 4:
        # refined point is a local maximum to well below grid resolution
        left, mid, right = info_density(np.array([x - h, x, x + h]), dist, out, params, trunc)
        assert mid >= max(left, right) - 1e-12
