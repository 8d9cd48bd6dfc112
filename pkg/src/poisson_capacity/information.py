"""Information density, mutual information and the capacity sandwich.

All quantities are in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize_scalar

from .channel import ChannelParams, DomainError, OutputTruncation, log_pmf_matrix
from .distribution import InputDistribution, OutputDistribution, induced_output, log_mixture

# rows of the scan evaluated per block, bounds peak memory for large A
_CHUNK = 4096
REFINE_XTOL = 1e-8


def relative_entropy_rows(logp: NDArray[np.float64], log_py: NDArray[np.float64]) -> NDArray[np.float64]:
    """``sum_k P(k) (log P(k) - log Q(k))`` for each row of ``logp`` against ``log_py``."""
    with np.errstate(invalid="ignore", over="ignore"):
        terms = np.exp(logp) * (logp - log_py)
    # 0 * log 0 = 0
    terms = np.where(np.isneginf(logp), 0.0, terms)
    return terms.sum(axis=-1)


def _densities(xs: NDArray[np.float64], out: OutputDistribution, params: ChannelParams,
               trunc: OutputTruncation) -> NDArray[np.float64]:
    values = np.empty(xs.size)
    for start in range(0, xs.size, _CHUNK):
        block = xs[start:start + _CHUNK]
        values[start:start + _CHUNK] = relative_entropy_rows(log_pmf_matrix(params, block, trunc), out.log_probs)
    return values


def info_density(x: ArrayLike, dist: InputDistribution, out: OutputDistribution,
                 params: ChannelParams, trunc: OutputTruncation) -> NDArray[np.float64] | float:
    """``i(x; P_X) = D(P(.|x) || P_Y)``, vectorized over ``x``."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr > params.amplitude):
        raise DomainError(f"input outside [0, {params.amplitude}]")
    values = _densities(arr.ravel(), out, params, trunc).reshape(arr.shape)
    return values[()] if values.ndim == 0 else values


def mutual_information(dist: InputDistribution, params: ChannelParams, trunc: OutputTruncation) -> float:
    """``I(X; Y) = sum_i p_i i(x_i; P_X)``."""
    logp = log_pmf_matrix(params, dist.points, trunc)
    out = induced_output(dist, params, trunc)
    return float(np.dot(dist.probs, relative_entropy_rows(logp, out.log_probs)))


def scan_spacing(amplitude: float) -> float:
    return min(1e-3, amplitude / 1e4)


@dataclass(frozen=True, eq=False)
class InfoDensityProfile:
    """Information density at the support and over a uniform scan of ``[0, A]``.

    ``argmax``/``max_density`` hold the scan maximum after local refinement.
    """

    at_support: NDArray[np.float64]
    grid: NDArray[np.float64]
    grid_values: NDArray[np.float64]
    argmax: float
    max_density: float

    @property
    def scan_grid(self) -> list[tuple[float, float]]:
        return list(zip(self.grid.tolist(), self.grid_values.tolist()))


def density_profile(dist: InputDistribution, params: ChannelParams, trunc: OutputTruncation,
                    spacing: float | None = None) -> InfoDensityProfile:
    """Scan ``i(x; P_X)`` on a uniform grid and refine the maximizer with bounded Brent search."""
    A = params.amplitude
    out = induced_output(dist, params, trunc)
    at_support = relative_entropy_rows(log_pmf_matrix(params, dist.points, trunc), out.log_probs)
    if A == 0:
        grid = np.zeros(1)
        values = _densities(grid, out, params, trunc)
        return InfoDensityProfile(at_support, grid, values, 0.0, float(values[0]))

    h = spacing or scan_spacing(A)
    n = int(math.ceil(A / h))
    grid = np.linspace(0.0, A, n + 1)
    values = _densities(grid, out, params, trunc)

    j = int(np.argmax(values))
    best_x, best = float(grid[j]), float(values[j])
    if not math.isfinite(best):
        # point-mass output with zero dark current: every x > 0 is infinitely informative
        return InfoDensityProfile(at_support, grid, values, A, math.inf)

    lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, n)]
    res = minimize_scalar(
        lambda t: -float(_densities(np.array([min(max(t, 0.0), A)]), out, params, trunc)[0]),
        bounds=(lo, hi), method="bounded", options={"xatol": REFINE_XTOL},
    )
    if -res.fun > best:
        best_x, best = float(res.x), float(-res.fun)
    # support points are part of [0, A] even when they fall between grid nodes
    i = int(np.argmax(at_support))
    if at_support[i] > best:
        best_x, best = float(dist.points[i]), float(at_support[i])
    return InfoDensityProfile(at_support, grid, values, best_x, best)


def capacity_sandwich(dist: InputDistribution, profile: InfoDensityProfile) -> tuple[float, float]:
    """``I(P_X) <= C(A, lambda) <= max_x i(x; P_X)``."""
    lower = float(np.dot(dist.probs, profile.at_support))
    return lower, profile.max_density
