"""
The Poisson channel law
=======================

Log-domain evaluation of P(k|x), its derivative in x, and the truncation of
the output alphabet.
"""

# %%
import numpy as np

from poisson_capacity import ChannelParams, log_pmf, pmf_derivative, truncation_for

params = ChannelParams(amplitude=5.0, dark_current=1.0)
k = np.arange(8)
print("P(k|x=2):", np.round(np.exp(log_pmf(params, 2.0, k)), 5))

# %%
# x + lambda = 0 is the degenerate case: all mass sits on k = 0.
dark = ChannelParams(4.0, 0.0)
print("log P(k|0), lambda=0:", log_pmf(dark, 0.0, np.arange(3)))

# %%
# The derivative vanishes at the Poisson mode.
print("dP(2|x)/dx at x=2, lambda=0:", pmf_derivative(dark, 2.0, 2))

# %%
# The retained alphabet grows with the largest mean A + lambda.
for amp in (1, 5, 10, 128):
    trunc = truncation_for(ChannelParams(amp, 0.0), 1e-12)
    print(f"A={amp:>4}: K={trunc.k_max}")
