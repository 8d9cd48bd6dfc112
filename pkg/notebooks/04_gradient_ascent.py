"""
Moving the support points
=========================

Projected gradient ascent on the interior point locations, with the masses
held fixed and the endpoints 0 and A pinned.
"""

# %%
from poisson_capacity import (ChannelParams, InputDistribution, LineSearchConfig, ba_run, ga_run, mi_gradient,
                              mutual_information, truncation_for)

params = ChannelParams(8.0, 0.0)
trunc = truncation_for(params, 1e-12, margin=10)
dist = ba_run(InputDistribution.uniform([0.0, 4.0, 8.0]), 100, params, trunc)
print("gradient:", mi_gradient(dist, params, trunc))

# %%
cfg = LineSearchConfig()
for _ in range(5):
    dist = ba_run(ga_run(dist, 20, cfg, params, trunc), 100, params, trunc)
    print(f"points {dist.points.round(4)}, I = {mutual_information(dist, params, trunc):.10f}")
