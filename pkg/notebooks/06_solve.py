"""
Capacity and the optimal input
==============================

The full solver alternates mass updates, point moves and optimality checks
until the capacity gap is certified.
"""

# %%
from poisson_capacity import ChannelParams, solve, support_bounds

for amp, lam in [(3.0, 0.0), (3.6, 0.0), (16.0, 0.0), (16.0, 10.0)]:
    params = ChannelParams(amp, lam)
    result = solve(params)
    b = support_bounds(result, params)
    print(f"A={amp:>4}, lambda={lam:>4}: C={result.capacity_nats:.6f} nats "
          f"({result.capacity_bits:.6f} bits), gap={result.duality_gap:.1e}, "
          f"{result.support_size} points >= {b.lower:.2f}")
    print("    points", result.distribution.points.round(4))
    print("    probs ", result.distribution.probs.round(4))
