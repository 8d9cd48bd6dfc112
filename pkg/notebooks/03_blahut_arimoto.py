"""
Blahut-Arimoto on a fixed support
=================================

With the points held fixed, Blahut-Arimoto reweights the masses and the
mutual information rises monotonically.
"""

# %%
from poisson_capacity import ChannelParams, InputDistribution, ba_run, mutual_information, truncation_for
from poisson_capacity.blahut_arimoto import fixed_support_optimum

params = ChannelParams(8.0, 0.0)
trunc = truncation_for(params, 1e-12, margin=10)
dist = InputDistribution.uniform([0.0, 1.0, 3.0, 8.0])

# %%
for n in (1, 10, 100, 1000):
    d = ba_run(dist, n, params, trunc)
    print(f"{n:>5} iterations: I = {mutual_information(d, params, trunc):.10f}, p = {d.probs.round(4)}")

# %%
# The limit point, reached directly by a constrained solve.
best = fixed_support_optimum(dist, params, trunc)
print(f"limit: I = {mutual_information(best, params, trunc):.10f}, p = {best.probs.round(4)}")
