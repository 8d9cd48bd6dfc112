"""Projected gradient ascent on the support locations with Armijo backtracking.

The probabilities stay fixed; the two endpoints ``0`` and ``A`` never move.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .channel import ChannelParams, OutputTruncation, log_pmf_matrix
from .distribution import InputDistribution
from .information import log_mixture, relative_entropy_rows


@dataclass(frozen=True)
class LineSearchConfig:
    initial_step: float = 1.0
    shrink_factor: float = 0.5
    armijo_coefficient: float = 1e-4
    max_backtracks: int = 40
    # seed each backtracking search of ga_run with the Barzilai-Borwein step
    barzilai_borwein: bool = True
    max_step: float = 1e8

    def __post_init__(self):
        if not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if not 0 < self.shrink_factor < 1:
            raise ValueError("shrink_factor must lie in (0, 1)")
        if not 0 < self.armijo_coefficient < 1:
            raise ValueError("armijo_coefficient must lie in (0, 1)")
        if not self.max_step >= self.initial_step:
            raise ValueError("max_step must be at least initial_step")
        if self.max_backtracks < 0:
            raise ValueError("max_backtracks must be nonnegative")


def _mi(points, probs, params, trunc) -> float:
    logp = log_pmf_matrix(params, points, trunc)
    log_py = log_mixture(logp, probs)
    return float(np.dot(probs, relative_entropy_rows(logp, log_py)))


def mi_gradient(dist: InputDistribution, params: ChannelParams, trunc: OutputTruncation) -> NDArray[np.float64]:
    """``dI/dx_i = p_i sum_k P'(k|x_i) log(P(k|x_i) / P_Y(k))``.

    The terms coming from the dependence of ``P_Y`` on ``x_i`` cancel exactly,
    even on the truncated alphabet. Entries for the two endpoints are zero.
    """
    grad = np.zeros(dist.size)
    if dist.size <= 2:
        return grad
    logp = log_pmf_matrix(params, dist.points, trunc)
    log_py = log_mixture(logp, dist.probs)
    inner = logp[1:-1]
    pmf = np.exp(inner)
    dpmf = -pmf
    dpmf[:, 1:] += pmf[:, :-1]
    log_ratio = np.where(np.isneginf(inner), 0.0, inner - log_py)
    grad[1:-1] = dist.probs[1:-1] * np.sum(dpmf * log_ratio, axis=1)
    return grad


def _step(dist, mi, g, t, cfg, params, trunc):
    """Backtrack from step ``t``; returns ``(dist, mi)`` unchanged when no step is accepted."""
    gg = float(np.dot(g, g))
    if gg == 0.0:
        return dist, mi
    A = params.amplitude
    for _ in range(cfg.max_backtracks + 1):
        cand = np.clip(dist.points + t * g, 0.0, A)
        # crossing or touching neighbours counts as a failed trial
        if np.all(np.diff(cand) > 0):
            new_mi = _mi(cand, dist.probs, params, trunc)
            if new_mi > mi and new_mi >= mi + cfg.armijo_coefficient * t * gg:
                return InputDistribution(cand, dist.probs), new_mi
        t *= cfg.shrink_factor
    return dist, mi


def ga_step(dist: InputDistribution, cfg: LineSearchConfig, params: ChannelParams,
            trunc: OutputTruncation) -> InputDistribution:
    """A single projected gradient step; the input is returned if no step improves ``I``."""
    mi = _mi(dist.points, dist.probs, params, trunc)
    g = mi_gradient(dist, params, trunc)
    return _step(dist, mi, g, cfg.initial_step, cfg, params, trunc)[0]


def ga_run(dist: InputDistribution, n_iters: int, cfg: LineSearchConfig, params: ChannelParams,
           trunc: OutputTruncation) -> InputDistribution:
    if n_iters < 1:
        raise ValueError("n_iters must be at least 1")
    if dist.size <= 2:
        return dist
    mi = _mi(dist.points, dist.probs, params, trunc)
    g = mi_gradient(dist, params, trunc)
    t = cfg.initial_step
    for _ in range(n_iters):
        new, mi = _step(dist, mi, g, t, cfg, params, trunc)
        if new is dist:
            if t == cfg.initial_step:
                # a rejected step would be rejected again from the same state
                break
            t = cfg.initial_step
            continue
        g_new = mi_gradient(new, params, trunc)
        t = cfg.initial_step
        if cfg.barzilai_borwein:
            s_ = new.points - dist.points
            curv = -float(np.dot(s_, g_new - g))
            if curv > 0:
                t = min(max(float(np.dot(s_, s_)) / curv, cfg.initial_step), cfg.max_step)
        dist, g = new, g_new
    return dist
