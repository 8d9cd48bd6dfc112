"""epsilon-KKT validation of a candidate input distribution and the repair rules.

The capacity is unknown during the iteration, so the density at ``x = 0``
(always a support point) stands in for it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .blahut_arimoto import ba_run
from .channel import ChannelParams, OutputTruncation
from .distribution import InputDistribution
from .information import InfoDensityProfile, density_profile


@dataclass(frozen=True, eq=False)
class KktReport:
    valid: bool
    epsilon: float
    candidate_x: float
    max_density: float
    density_at_zero: float
    violating_points: NDArray[np.float64]
    profile: InfoDensityProfile
    exterior_violation: bool
    support_violation: bool

    @property
    def residual(self) -> float:
        """Largest deviation of a support density from the density at zero."""
        return float(np.max(np.abs(self.profile.at_support - self.density_at_zero)))


def kkt_validate(dist: InputDistribution, epsilon: float, params: ChannelParams,
                 trunc: OutputTruncation, spacing: float | None = None) -> KktReport:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if dist.points[0] != 0.0:
        raise ValueError("the density at 0 anchors the test; 0 must be a support point")
    profile = density_profile(dist, params, trunc, spacing=spacing)
    at_zero = float(profile.at_support[0])
    exterior = bool(at_zero + epsilon < profile.max_density)
    off_strip = np.abs(profile.at_support - at_zero) > epsilon
    return KktReport(
        valid=not (exterior or off_strip.any()),
        epsilon=epsilon,
        candidate_x=profile.argmax,
        max_density=profile.max_density,
        density_at_zero=at_zero,
        violating_points=dist.points[off_strip].copy(),
        profile=profile,
        exterior_violation=exterior,
        support_violation=bool(off_strip.any()),
    )


def _merge_pair(dist: InputDistribution, report: KktReport, delta: float):
    """Closest pair ``x1 < x2`` of interior violating points with ``x2 - x1 < delta`` bracketing the candidate."""
    x_hat = report.candidate_x
    interior = report.violating_points[(report.violating_points > 0) & (report.violating_points < dist.points[-1])]
    best = None
    for a in range(interior.size):
        for b in range(a + 1, interior.size):
            x1, x2 = interior[a], interior[b]
            gap = x2 - x1
            if gap < delta and x1 <= x_hat <= x2 and (best is None or gap < best[1] - best[0]):
                best = (x1, x2)
    return best


def kkt_update(dist: InputDistribution, report: KktReport, params: ChannelParams, trunc: OutputTruncation,
               delta: float = 0.1, min_spacing: float = 1e-2, n_ba: int = 100) -> InputDistribution:
    """Repair a distribution rejected by ``kkt_validate``.

    * both conditions fail and two violating points closer than ``delta``
      bracket the candidate: they are replaced by the candidate, which takes
      their combined mass;
    * the exterior condition fails: the candidate joins the support and all
      probabilities are reset to uniform;
    * otherwise (only support densities off, or the candidate collides with an
      existing point) the probabilities get another ``n_ba`` Blahut-Arimoto steps.
    """
    if report.valid:
        raise ValueError("kkt_update called with a valid report")
    x, p = dist.points, dist.probs
    x_hat = report.candidate_x

    if report.exterior_violation and report.support_violation:
        pair = _merge_pair(dist, report, delta)
        if pair is not None:
            i1, i2 = np.searchsorted(x, pair)
            keep = np.ones(x.size, dtype=bool)
            keep[[i1, i2]] = False
            pts = np.append(x[keep], x_hat)
            prs = np.append(p[keep], p[i1] + p[i2])
            order = np.argsort(pts, kind="stable")
            return InputDistribution(pts[order], prs[order])

    if report.exterior_violation and np.min(np.abs(x - x_hat)) >= min_spacing:
        pts = np.sort(np.append(x, x_hat))
        return InputDistribution.uniform(pts)

    return ba_run(dist, n_ba, params, trunc)
