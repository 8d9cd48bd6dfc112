"""Blahut-Arimoto iteration on the probabilities of a fixed support."""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from .channel import ChannelParams, OutputTruncation, log_pmf_matrix
from .distribution import PRUNE_THRESHOLD, InputDistribution
from .information import log_mixture, relative_entropy_rows


def _iterate(logp, probs, n_iters, tol):
    """Multiplicative update ``p_i <- p_i exp(i(x_i)) / Z`` with pruning; returns (probs, keep mask)."""
    keep = np.ones(probs.size, dtype=bool)
    rows = logp
    for _ in range(n_iters):
        log_py = log_mixture(rows, probs)
        dens = relative_entropy_rows(rows, log_py)
        w = probs * np.exp(dens - dens.max())
        new = w / w.sum()

        small = new < PRUNE_THRESHOLD
        small[0] = small[-1] = False
        if small.any():
            idx = np.flatnonzero(keep)
            keep[idx[small]] = False
            rows = rows[~small]
            new = new[~small] / new[~small].sum()
            probs = new
            continue
        step = np.max(np.abs(new - probs))
        probs = new
        if step < tol:
            break
    return probs, keep


def ba_step(dist: InputDistribution, params: ChannelParams, trunc: OutputTruncation) -> InputDistribution:
    """One Blahut-Arimoto update; support points are unchanged except for pruned ones."""
    return ba_run(dist, 1, params, trunc, tol=0.0)


def ba_run(dist: InputDistribution, n_iters: int, params: ChannelParams, trunc: OutputTruncation,
           tol: float = 1e-14) -> InputDistribution:
    """Up to ``n_iters`` Blahut-Arimoto steps, stopping once ``max |dp| < tol``."""
    if n_iters < 1:
        raise ValueError("n_iters must be at least 1")
    if dist.size == 1:
        return dist
    logp = log_pmf_matrix(params, dist.points, trunc)
    probs, keep = _iterate(logp, dist.probs.copy(), n_iters, tol)
    return InputDistribution(dist.points[keep], probs)


def fixed_support_optimum(dist: InputDistribution, params: ChannelParams, trunc: OutputTruncation,
                          ftol: float = 1e-15, maxiter: int = 500) -> InputDistribution:
    """Jump to the limit of the Blahut-Arimoto iteration on the current support.

    The capacity of the finite-input channel is a concave program in the
    probabilities; SLSQP solves it directly, warm-started from ``dist``.
    Points left with less than ``PRUNE_THRESHOLD`` mass are dropped. The
    input is returned unchanged if the solve does not improve ``I``.
    """
    if dist.size <= 1:
        return dist
    logp = log_pmf_matrix(params, dist.points, trunc)
    pmf = np.exp(logp)
    neg_entropy = relative_entropy_rows(logp, np.zeros(logp.shape[1]))
    tiny = np.finfo(float).tiny

    def objective(q):
        py = np.maximum(q @ pmf, tiny)
        return -(q @ neg_entropy - py @ np.log(py))

    def gradient(q):
        py = np.maximum(q @ pmf, tiny)
        return -(neg_entropy - pmf @ np.log(py) - 1.0)

    res = minimize(
        objective, dist.probs, jac=gradient, method="SLSQP", bounds=[(0.0, 1.0)] * dist.size,
        constraints=[{"type": "eq", "fun": lambda q: q.sum() - 1.0, "jac": lambda q: np.ones_like(q)}],
        options={"ftol": ftol, "maxiter": maxiter},
    )
    q = np.clip(res.x, 0.0, None)
    if q[0] < PRUNE_THRESHOLD or q[-1] < PRUNE_THRESHOLD:
        return dist
    q /= q.sum()
    keep = q >= PRUNE_THRESHOLD
    if objective(q) > objective(dist.probs):
        return dist
    return InputDistribution(dist.points[keep], q[keep] / q[keep].sum())
