"""Poisson channel law with dark current.

Conditioned on the input ``x`` the output is Poisson with mean ``x + dark_current``.
Everything is evaluated in the log domain; the degenerate mean ``0`` follows
the conventions ``0**0 = 1`` and ``0! = 1`` (a point mass at ``k = 0``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln, xlogy
from scipy.stats import poisson


class DomainError(ValueError):
    """Raised when a channel input lies outside ``[0, amplitude]``."""


@dataclass(frozen=True)
class ChannelParams:
    """Amplitude constraint ``A`` and dark current ``lambda``."""

    amplitude: float
    dark_current: float = 0.0

    def __post_init__(self):
        for name in ("amplitude", "dark_current"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value!r}")
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "dark_current", float(self.dark_current))


@dataclass(frozen=True)
class OutputTruncation:
    """Output alphabet ``{0, ..., k_max}`` retained in every sum."""

    k_max: int
    tail_mass_bound: float

    @property
    def symbols(self) -> NDArray[np.int64]:
        return np.arange(self.k_max + 1)


def _check_inputs(params: ChannelParams, x: NDArray[np.float64]) -> None:
    if np.any(~np.isfinite(x)) or np.any(x < 0) or np.any(x > params.amplitude):
        raise DomainError(f"input outside [0, {params.amplitude}]: {x}")


def log_pmf(params: ChannelParams, x: ArrayLike, k: ArrayLike) -> NDArray[np.float64] | float:
    """Log of ``P(k | x)`` in nats; broadcasts over ``x`` and ``k``.

    Returns ``-inf`` for ``k > 0`` when ``x + dark_current == 0``.
    """
    x = np.asarray(x, dtype=float)
    k = np.asarray(k)
    _check_inputs(params, x)
    if np.any(k < 0):
        raise DomainError(f"output symbol must be nonnegative: {k}")
    mean = x + params.dark_current
    with np.errstate(divide="ignore"):
        out = xlogy(k, mean) - mean - gammaln(k + 1.0)
    return out[()] if out.ndim == 0 else out


def log_pmf_matrix(params: ChannelParams, points: ArrayLike, trunc: OutputTruncation) -> NDArray[np.float64]:
    """Rows ``log P(. | x_i)`` over the truncated alphabet, shape ``(n, k_max + 1)``."""
    points = np.atleast_1d(np.asarray(points, dtype=float))
    k = trunc.symbols
    return log_pmf(params, points[:, None], k[None, :])


def pmf_derivative(params: ChannelParams, x: ArrayLike, k: ArrayLike) -> NDArray[np.float64] | float:
    """``dP(k|x)/dx = P(k-1|x) - P(k|x)`` with ``P(-1|x) = 0``."""
    x = np.asarray(x, dtype=float)
    k = np.asarray(k)
    here = np.exp(log_pmf(params, x, k))
    below = np.where(k > 0, np.exp(log_pmf(params, x, np.maximum(k - 1, 0))), 0.0)
    out = np.asarray(below - here, dtype=float)
    return out[()] if out.ndim == 0 else out


def truncation_for(params: ChannelParams, tail_mass_bound: float = 1e-12, margin: int = 0) -> OutputTruncation:
    """Smallest ``K`` with ``P(Y > K) <= tail_mass_bound`` at the largest mean ``A + lambda``.

    ``margin`` extra symbols are appended on top of the minimal ``K``.
    """
    if not 0 < tail_mass_bound < 1:
        raise ValueError(f"tail_mass_bound must lie in (0, 1), got {tail_mass_bound!r}")
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    mean = params.amplitude + params.dark_current
    if mean == 0:
        return OutputTruncation(k_max=margin, tail_mass_bound=tail_mass_bound)
    k = int(poisson.isf(tail_mass_bound, mean))
    # isf is a quantile; walk to the exact smallest K satisfying the tail bound
    while k > 0 and poisson.sf(k - 1, mean) <= tail_mass_bound:
        k -= 1
    while poisson.sf(k, mean) > tail_mass_bound:
        k += 1
    return OutputTruncation(k_max=k + margin, tail_mass_bound=tail_mass_bound)
