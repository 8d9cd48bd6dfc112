"""
Checking optimality
===================

A distribution is accepted when the information density nowhere exceeds its
value at zero by more than epsilon, and all support points sit within epsilon
of it.  Otherwise the update rule inserts or merges points.
"""

# %%
from poisson_capacity import ChannelParams, InputDistribution, ba_run, kkt_update, kkt_validate, truncation_for

params = ChannelParams(4.0, 0.0)
trunc = truncation_for(params, 1e-12, margin=10)
binary = ba_run(InputDistribution.uniform([0.0, 4.0]), 1000, params, trunc)

report = kkt_validate(binary, 1e-6, params, trunc)
print(f"valid={report.valid}, i(0)={report.density_at_zero:.6f}, "
      f"max i={report.max_density:.6f} at x={report.candidate_x:.4f}")

# %%
# Binary signaling is not optimal above A of about 3.37, so a point is inserted.
grown = kkt_update(binary, report, params, trunc)
print("after update:", grown.points.round(4))
