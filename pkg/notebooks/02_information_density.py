"""
Information density and the capacity sandwich
=============================================

For any input distribution, I(P_X) <= C <= max_x i(x; P_X).  The gap between
the two sides certifies how far the distribution is from optimal.
"""

# %%
import numpy as np

from poisson_capacity import (ChannelParams, InputDistribution, capacity_sandwich, density_profile,
                              induced_output, info_density, mutual_information, truncation_for)

params = ChannelParams(4.0, 0.0)
trunc = truncation_for(params, 1e-12, margin=10)
dist = InputDistribution.uniform([0.0, 4.0])

# %%
out = induced_output(dist, params, trunc)
xs = np.linspace(0, 4, 9)
for x, d in zip(xs, info_density(xs, dist, out, params, trunc)):
    print(f"i({x:.1f}) = {d:.6f}")

# %%
profile = density_profile(dist, params, trunc)
lower, upper = capacity_sandwich(dist, profile)
print(f"I = {mutual_information(dist, params, trunc):.6f}")
print(f"sandwich [{lower:.6f}, {upper:.6f}], density peaks at x = {profile.argmax:.4f}")
