"""Finite-support input distributions and the induced output pmf."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .channel import ChannelParams, OutputTruncation, log_pmf_matrix

PRUNE_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class InputDistribution:
    """Mass points ``points`` (increasing, in ``[0, A]``) with weights ``probs``."""

    points: NDArray[np.float64]
    probs: NDArray[np.float64]

    def __post_init__(self):
        points = np.array(self.points, dtype=float).ravel()
        probs = np.array(self.probs, dtype=float).ravel()
        if points.shape != probs.shape:
            raise ValueError(f"points and probs differ in length: {points.size} vs {probs.size}")
        points.flags.writeable = False
        probs.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, points: ArrayLike) -> "InputDistribution":
        points = np.asarray(points, dtype=float)
        return cls(points, np.full(points.size, 1.0 / points.size))

    @property
    def size(self) -> int:
        return self.points.size

    def __len__(self) -> int:
        return self.points.size

    def __repr__(self) -> str:
        return f"InputDistribution(points={self.points.tolist()}, probs={self.probs.tolist()})"


@dataclass(frozen=True, eq=False)
class OutputDistribution:
    """Log of the induced output pmf on ``{0, ..., k_max}``."""

    log_probs: NDArray[np.float64]

    @property
    def probs(self) -> NDArray[np.float64]:
        return np.exp(self.log_probs)


def validate(dist: InputDistribution, params: ChannelParams, min_spacing: Optional[float] = None) -> Optional[str]:
    """Return ``None`` if ``dist`` satisfies every invariant, else a description of the first violation.

    Spacing is only checked when ``min_spacing`` is given (it holds after clustering).
    """
    x, p = dist.points, dist.probs
    if x.size == 0:
        return "empty support"
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
        return "non-finite entries"
    if np.any(np.diff(x) <= 0):
        return "points not strictly increasing"
    if x[0] < 0 or x[-1] > params.amplitude:
        return f"points outside [0, {params.amplitude:g}]"
    if np.any(p <= 0):
        return "nonpositive probability"
    total = p.sum()
    if abs(total - 1.0) > 1e-12:
        return f"probabilities sum to {total:.12g}"
    if x[0] != 0.0:
        return "endpoint 0 missing"
    if x[-1] != params.amplitude:
        return f"endpoint A={params.amplitude:g} missing"
    if min_spacing is not None and x.size > 2:
        # both endpoints are kept even when A itself is below min_spacing
        gaps = np.diff(x)
        if params.amplitude >= min_spacing and np.any(gaps < min_spacing):
            return f"spacing below {min_spacing:g}"
    return None


def log_mixture(logp: NDArray[np.float64], weights: NDArray[np.float64]) -> NDArray[np.float64]:
    """Column-wise ``log sum_i w_i exp(logp[i])``, the induced output log-pmf."""
    m = logp.max(axis=0)
    safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        return safe + np.log(weights @ np.exp(logp - safe))


def induced_output(dist: InputDistribution, params: ChannelParams, trunc: OutputTruncation) -> OutputDistribution:
    """``log P_Y(k) = log sum_i p_i P(k | x_i)``."""
    logp = log_pmf_matrix(params, dist.points, trunc)
    return OutputDistribution(log_mixture(logp, dist.probs))


def normalized(points: ArrayLike, probs: ArrayLike) -> InputDistribution:
    probs = np.asarray(probs, dtype=float)
    return InputDistribution(points, probs / probs.sum())


def prune(dist: InputDistribution, threshold: float = PRUNE_THRESHOLD) -> InputDistribution:
    """Drop interior points whose mass fell below ``threshold`` and renormalize."""
    keep = dist.probs >= threshold
    keep[0] = keep[-1] = True
    if keep.all():
        return dist
    return normalized(dist.points[keep], dist.probs[keep])


def cluster(dist: InputDistribution, min_spacing: float = 1e-2) -> InputDistribution:
    """Merge runs of consecutive points closer than ``min_spacing``.

    A merged run sits at its probability-weighted mean and carries the summed
    mass. Runs touching the first or last point collapse onto that endpoint.
    """
    x, p = dist.points, dist.probs
    n = x.size
    if n < 2:
        return dist
    last = n - 1
    # a run starts wherever the gap to the previous point is large enough
    starts = np.flatnonzero(np.concatenate(([True], np.diff(x) >= min_spacing)))
    if starts.size == n:
        return dist
    bounds = np.append(starts, n)
    new_x, new_p = [], []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        run_p = p[lo:hi]
        mass = run_p.sum()
        has_first, has_last = lo == 0, hi - 1 == last
        if has_first and has_last:
            # A < min_spacing: both endpoints stay, interior mass goes to the nearer one
            mid = 0.5 * (x[0] + x[last])
            left = x[lo:hi] <= mid
            new_x += [x[0], x[last]]
            new_p += [run_p[left].sum(), run_p[~left].sum()]
            continue
        if has_first:
            loc = x[0]
        elif has_last:
            loc = x[last]
        elif hi - lo == 1:
            loc = x[lo]
        else:
            # clip so rounding cannot push the mean toward a neighbouring run
            loc = min(max(np.dot(run_p, x[lo:hi]) / mass, x[lo]), x[hi - 1])
        new_x.append(loc)
        new_p.append(mass)
    return InputDistribution(np.array(new_x), np.array(new_p))
