"""Capacity and optimal input pmf of the amplitude-constrained Poisson channel.

``solve`` alternates Blahut-Arimoto on the probabilities with gradient ascent
on the locations, clusters near-coincident points, and stops once the
distribution passes the epsilon-KKT test.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .blahut_arimoto import ba_run, fixed_support_optimum
from .channel import ChannelParams, truncation_for
from .distribution import InputDistribution, cluster, validate
from .gradient_ascent import LineSearchConfig, ga_run
from .information import mutual_information
from .kkt import KktReport, kkt_update, kkt_validate

log = logging.getLogger(__name__)

TRUNCATION_MARGIN = 10


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-6
    n_ba: int = 100
    n_ga: int = 20
    inner_loop_count: int = 100
    max_outer_iterations: int = 200
    min_spacing: float = 1e-2
    delta: float = 0.1
    line_search: LineSearchConfig = field(default_factory=LineSearchConfig)
    tail_mass_bound: float = 1e-12
    # solve the fixed-support probability problem to optimality after each BA run
    polish: bool = True
    # early exit of the inner loop
    stall_mi: float = 1e-12
    stall_move: float = 1e-10

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        for name in ("n_ba", "n_ga", "inner_loop_count", "max_outer_iterations"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not self.min_spacing > 0:
            raise ValueError("min_spacing must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not 0 < self.tail_mass_bound < 1:
            raise ValueError("tail_mass_bound must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class SolveResult:
    params: ChannelParams
    distribution: InputDistribution
    capacity_nats: float
    duality_gap: float
    kkt: KktReport
    outer_iterations: int
    converged: bool

    @property
    def support_size(self) -> int:
        return self.distribution.size

    @property
    def capacity_bits(self) -> float:
        return self.capacity_nats / math.log(2)

    @property
    def support_lower_bound(self) -> float:
        """``exp(I)``: no distribution with fewer points can carry ``I`` nats."""
        return math.exp(self.capacity_nats)

    @property
    def support_upper_order(self) -> float:
        A = self.params.amplitude
        return A * math.log(A) ** 2 if A > 1 else float(self.support_size)


def initial_support(params: ChannelParams, warm_start: Optional[InputDistribution] = None) -> InputDistribution:
    """Uniform grid of ``max(2, ceil(2 sqrt(A)))`` points, or a warm start stretched onto ``[0, A]``."""
    A = params.amplitude
    if A == 0:
        return InputDistribution([0.0], [1.0])
    if warm_start is not None and warm_start.size >= 2 and warm_start.points[-1] > 0:
        pts = warm_start.points * (A / warm_start.points[-1])
        pts[-1] = A
        if np.all(np.diff(pts) > 0):
            return InputDistribution(pts, warm_start.probs)
    n0 = max(2, math.ceil(2 * math.sqrt(A)))
    return InputDistribution.uniform(np.linspace(0.0, A, n0))


def _optimize(dist, cfg, params, trunc):
    """The inner loop: alternating BA and GA passes until the objective stalls."""
    mi = mutual_information(dist, params, trunc)
    for _ in range(cfg.inner_loop_count):
        prev = dist
        dist = ba_run(dist, cfg.n_ba, params, trunc)
        if cfg.polish:
            dist = fixed_support_optimum(dist, params, trunc)
        dist = ga_run(dist, cfg.n_ga, cfg.line_search, params, trunc)
        new_mi = mutual_information(dist, params, trunc)
        moved = (np.max(np.abs(dist.points - prev.points)) if dist.size == prev.size else math.inf)
        gain, mi = new_mi - mi, new_mi
        if gain < cfg.stall_mi and moved < cfg.stall_move:
            break
    if cfg.polish:
        # the last gradient pass moved the points after the probabilities were optimized
        dist = fixed_support_optimum(dist, params, trunc)
    return dist


def solve(params: ChannelParams, cfg: SolverConfig = SolverConfig(),
          warm_start: Optional[InputDistribution] = None) -> SolveResult:
    trunc = truncation_for(params, cfg.tail_mass_bound, margin=TRUNCATION_MARGIN)
    dist = initial_support(params, warm_start)
    if params.amplitude == 0:
        report = kkt_validate(dist, cfg.epsilon, params, trunc)
        return SolveResult(params, dist, 0.0, 0.0, report, 0, True)

    report = None
    outer = 0
    while outer < cfg.max_outer_iterations:
        outer += 1
        dist = _optimize(dist, cfg, params, trunc)
        dist = cluster(dist, cfg.min_spacing)
        report = kkt_validate(dist, cfg.epsilon, params, trunc)
        log.debug("A=%g lambda=%g outer=%d n=%d gap=%.3g valid=%s", params.amplitude, params.dark_current,
                  outer, dist.size, report.max_density - report.density_at_zero, report.valid)
        if report.valid:
            break
        dist = kkt_update(dist, report, params, trunc, delta=cfg.delta,
                          min_spacing=cfg.min_spacing, n_ba=cfg.n_ba)

    if not report.valid:
        # the last update may have changed dist; report on the state actually returned
        dist = cluster(_optimize(dist, cfg, params, trunc), cfg.min_spacing)
        report = kkt_validate(dist, cfg.epsilon, params, trunc)
        log.warning("no epsilon-KKT certificate for A=%g lambda=%g after %d outer iterations",
                    params.amplitude, params.dark_current, outer)

    problem = validate(dist, params)
    if problem is not None:
        raise RuntimeError(f"solver produced an invalid distribution: {problem}")
    capacity = float(np.dot(dist.probs, report.profile.at_support))
    return SolveResult(params, dist, capacity, report.max_density - capacity, report, outer, report.valid)


@dataclass(frozen=True)
class SupportBounds:
    lower: float
    upper_order: float
    dark_current_heuristic: float
    support_size: int
    violates_lower: bool


def support_bounds(result: SolveResult, params: ChannelParams, c1: float = 1.0, c2: float = 1.0) -> SupportBounds:
    """Support-size diagnostics.

    ``lower = exp(I)`` is a hard lower bound; ``upper_order = A ln^2 A`` only
    fixes the order; ``dark_current_heuristic = c1 sqrt(A) exp(-c2 sqrt(lambda / A))``
    uses unknown constants and never enters pass/fail logic.
    """
    A, lam = params.amplitude, params.dark_current
    n = result.support_size
    if A == 0:
        return SupportBounds(1.0, 1.0, 1.0, n, n < 1)
    lower = math.exp(result.capacity_nats)
    upper = A * math.log(A) ** 2 if A > 1 else float(n)
    heuristic = c1 * math.sqrt(A) * math.exp(-c2 * math.sqrt(lam / A))
    # tolerate rounding right at an integer
    return SupportBounds(lower, upper, heuristic, n, n < math.ceil(lower - 1e-9))
